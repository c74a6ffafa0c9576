#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace tvlab {

using ordered_json = nlohmann::ordered_json;

struct Estimate {
    std::string name;
    double value = 0.0;
    double se = 0.0;
};

struct Statistic {
    std::string name;
    double value = 0.0;
};

/// Machine-readable record of one verification experiment. Every number is
/// traceable to the recorded config (seed, dt, paths, ...); thresholds are
/// stored next to the verdict they gate. The config deliberately excludes
/// execution details such as thread count, so reports are byte-identical
/// across schedulings.
struct MonteCarloReport {
    std::string experiment;
    ordered_json config = ordered_json::object();
    std::vector<Estimate> estimates;
    std::vector<Statistic> statistics;
    bool pass = true;
    ordered_json thresholds = ordered_json::object();

    ordered_json to_json() const {
        ordered_json j;
        j["experiment"] = experiment;
        j["config"] = config;
        auto est = ordered_json::array();
        for (const auto& e : estimates)
            est.push_back(ordered_json{{"name", e.name}, {"value", e.value}, {"se", e.se}});
        j["estimates"] = est;
        auto st = ordered_json::array();
        for (const auto& s : statistics)
            st.push_back(ordered_json{{"name", s.name}, {"value", s.value}});
        j["statistics"] = st;
        j["verdict"] = ordered_json{{"pass", pass}, {"thresholds", thresholds}};
        return j;
    }

    std::string summary() const {
        std::ostringstream os;
        os << experiment << ": " << (pass ? "PASS" : "FAIL") << "\n";
        for (const auto& e : estimates)
            os << "  " << e.name << " = " << e.value << " (se " << e.se << ")\n";
        for (const auto& s : statistics) os << "  " << s.name << " = " << s.value << "\n";
        return os.str();
    }
};

}  // namespace tvlab
