#ifndef SDS_REPORT_JSON_HPP
#define SDS_REPORT_JSON_HPP

#include <json.hpp>

#include "sds/assumptions.hpp"
#include "sds/designer.hpp"
#include "sds/estimator.hpp"

namespace sds {

// NaN maps to null, infinities to the strings "inf"/"-inf".
nlohmann::json json_number(double v);

nlohmann::json to_json(const DesignReport& rep);
nlohmann::json to_json(const ExponentEstimate& est);
nlohmann::json to_json(const AssumptionReport& rep);

}  // namespace sds

#endif
