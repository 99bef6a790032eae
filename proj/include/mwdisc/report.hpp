#pragma once

#include "mwdisc/bounds.hpp"
#include "mwdisc/clustering.hpp"
#include "mwdisc/discrepancy.hpp"
#include "mwdisc/generators.hpp"
#include "mwdisc/spectrum.hpp"
#include "mwdisc/stepvec.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace mwdisc {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Two-space indented JSON with every double printed as %.17g; NaN and
/// infinities become null.
std::string dump_json(const Json& j);

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const DiscrepancyCertificate& c);
Json to_json(const PartitionPair& p);
Json to_json(const Spectrum& s, std::optional<Index> top = std::nullopt);
Json to_json(const ModularitySpectrum& s, std::optional<Index> top = std::nullopt);
Json to_json(const KMeansResult& r);
Json to_json(const PipelineResult& r);
Json to_json(const EmlCheck& e);
Json to_json(const BoundReport& r);
Json to_json(const Inequality& q);
Json to_json(const StepVector& s);
Json to_json(const ProofTrace& t);
Json to_json(const WeakBound& w);
Json to_json(const GeneratorInfo& g);

}  // namespace mwdisc
