#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "sf/instance.hpp"
#include "sf/sfp_io.hpp"

namespace sf::cli {

inline const char* kToolkitVersion = "0.1.0";

/// Content digest of an instance: FNV-1a over the canonical SFP bytes.
inline std::string instance_digest(const Instance& inst) {
    std::string text = write_instance_text(inst);
    u64 h = fnv1a(text.data(), text.size());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

/// One solver run, serialized for the report stream. The feasible flag is
/// recomputed by evaluate_solution before emission, never taken from the
/// solver.
struct RunReport {
    std::string digest;
    std::string algorithm;
    std::string parameters;  // eps, certificates; "" when none
    Cost cost = 0;
    std::vector<int> edges;  // 1-based pairs flattened in the JSON
    bool feasible = false;
    double wall_ms = 0;
    std::string status = "ok";  // ok | infeasible | resource-cap | input-error
    nlohmann::json verification = nlohmann::json::object();

    nlohmann::json to_json(const Instance& inst) const {
        nlohmann::json j;
        j["schema"] = 1;
        j["toolkit_version"] = kToolkitVersion;
        j["instance"] = digest;
        j["algorithm"] = algorithm;
        if (!parameters.empty()) j["parameters"] = parameters;
        j["status"] = status;
        if (status == "ok") {
            j["cost"] = cost;
            j["feasible"] = feasible;
            auto arr = nlohmann::json::array();
            for (int e : edges)
                arr.push_back({inst.edges[e].u + 1, inst.edges[e].v + 1});
            j["edges"] = arr;
        }
        j["wall_ms"] = wall_ms;
        if (!verification.empty()) j["verification"] = verification;
        return j;
    }
};

}  // namespace sf::cli
