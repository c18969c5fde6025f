#ifndef OBSTRUCT_REPORT_HPP
#define OBSTRUCT_REPORT_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "obstruct/beta.hpp"
#include "obstruct/decomposition.hpp"
#include "obstruct/factors.hpp"
#include "obstruct/mme.hpp"
#include "obstruct/numeric.hpp"
#include "obstruct/symbolic.hpp"

namespace obstruct {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;

Json to_json(const BigInt& x);  // decimal string
Json to_json(const Rational& q);  // {"num", "den"} strings
Json to_json(const QuadraticNumber& x);
// Non-finite values become the strings "inf", "-inf", "nan".
Json to_json_number(double x);

Json to_json(const BetaExpansion& e);
Json to_json(const EntropyEstimate& e);
Json to_json(const SpecificationReport& r, std::size_t alphabet);
Json to_json(const GluingTime& g, std::size_t alphabet);
Json to_json(const ObstructionBound& b);
Json to_json(const CountingReport& r);
Json to_json(const GibbsReport& r, std::size_t alphabet);
Json to_json(const MixingReport& r, std::size_t alphabet);
Json to_json(const ExpansivityReport& r);
Json to_json(const FactorEntropyResult& r, std::size_t alphabet);
Json to_json(const TheoremCReport& r, std::size_t alphabet);

// Measure file: {schema, alphabet, depth, provenance, n, error_bound,
// entries: [{word, mass_num, mass_den} or {word, mass, exact}]}.
Json measure_to_json(const CylinderMeasure& m);
// Throws InputError on any schema violation.
CylinderMeasure measure_from_json(const Json& j);
CylinderMeasure read_measure_file(const std::string& path);

// The report without its "timestamp" field, for comparisons.
Json strip_timestamp(Json report);

}  // namespace obstruct

#endif  // OBSTRUCT_REPORT_HPP
