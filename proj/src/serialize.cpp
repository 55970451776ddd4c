#include "dilated/serialize.hpp"

#include <cmath>
#include <cstdio>

#include "dilated/errors.hpp"

namespace dilated {

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

json to_json(const PsdMatrix& m) {
    return json{{"order", m.order()}, {"entries", m.entries()}};
}

PsdMatrix psd_from_json(const json& j) {
    return PsdMatrix(j.at("order").get<std::size_t>(), j.at("entries").get<std::vector<double>>());
}

json to_json(const Measure& mu) {
    if (mu.is_lattice()) {
        const auto& m = mu.lattice();
        json w;
        if (m.dim == 1) {
            w = m.weights;
        } else {
            w = json::array();
            for (std::size_t i = 0; i < m.shape[0]; ++i) {
                json row = json::array();
                for (std::size_t j = 0; j < m.shape[1]; ++j) row.push_back(m.weights[i * m.shape[1] + j]);
                w.push_back(std::move(row));
            }
        }
        return json{{"dim", m.dim}, {"spacing", m.spacing}, {"offset", m.offset}, {"weights", w}};
    }
    const auto& g = mu.gaussian();
    return json{{"mean", g.mean}, {"covariance", to_json(g.covariance)}};
}

Measure measure_from_json(const json& j) {
    if (j.contains("weights")) {
        LatticeMeasure m;
        m.dim = j.at("dim").get<int>();
        m.spacing = j.at("spacing").get<std::vector<double>>();
        m.offset = j.at("offset").get<std::vector<double>>();
        const json& w = j.at("weights");
        if (m.dim == 1) {
            m.weights = w.get<std::vector<double>>();
            m.shape = {m.weights.size()};
        } else {
            m.shape = {w.size(), w.at(0).size()};
            for (const auto& row : w) {
                if (row.size() != m.shape[1]) throw ConfigError("measure_from_json: ragged weights");
                for (const auto& v : row) m.weights.push_back(v.get<double>());
            }
        }
        m.validate();
        return Measure(m);
    }
    GaussianMeasure g;
    g.mean = j.at("mean").get<std::vector<double>>();
    g.covariance = psd_from_json(j.at("covariance"));
    return Measure(g);
}

json to_json(const ConvergenceReport& r) {
    return json{{"kind", kind_name(r.kind)},
                {"l", r.l},
                {"iterations", r.iterations},
                {"distance_to_target", r.distance_to_target},
                {"successive_distance", r.successive_distance},
                {"empirical_ratio", r.empirical_ratio},
                {"theoretical_ratio", r.theoretical_ratio},
                {"grading_drift", r.grading_drift},
                {"verdict", verdict_name(r.verdict)},
                {"final_measure", to_json(r.final_measure)}};
}

std::string report_to_csv(const ConvergenceReport& r) {
    std::string out = "#schema=1\n";
    out += "iteration,d_to_target,d_successive,ratio,grading_drift\n";
    for (std::size_t n = 0; n < r.distance_to_target.size(); ++n) {
        out += std::to_string(n);
        out += ',' + fmt(r.distance_to_target[n]);
        out += ',';
        if (n >= 1 && n - 1 < r.successive_distance.size()) out += fmt(r.successive_distance[n - 1]);
        out += ',';
        if (n >= 2 && n - 1 < r.successive_distance.size() && r.successive_distance[n - 2] > 0.0)
            out += fmt(r.successive_distance[n - 1] / r.successive_distance[n - 2]);
        out += ',' + fmt(r.grading_drift[n]);
        out += '\n';
    }
    return out;
}

}  // namespace dilated
