#pragma once

#include <memory>

#include "bcq/certificate.hpp"
#include "bcq/rates.hpp"

namespace bcq {

// JSON grammar used by config files and embedded verbatim in certificates.
// Rationals are strings "num/den"; kinds are lowercase tags.

Json to_json(const Sequence& s);
Sequence sequence_from_json(const Json& j);

Json to_json(const EventModel& m);
std::shared_ptr<EventModel> model_from_json(const Json& j);

Json to_json(const DivergenceRate& r);
DivergenceRate divergence_rate_from_json(const Json& j);

Json to_json(const ConvergenceRate& r);
ConvergenceRate convergence_rate_from_json(const Json& j);

Json to_json(const LiminfWitness& w);
std::unique_ptr<LiminfWitness> liminf_witness_from_json(const Json& j);

Json to_json(const GFunction& g);
GFunction g_function_from_json(const Json& j);

}  // namespace bcq
