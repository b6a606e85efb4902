#include "plates/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "plates/polynomial.hpp"

namespace plates {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': cannot parse number from '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': cannot parse integer from '" + v + "'");
    }
}

}  // namespace

std::string ExperimentConfig::emit() const {
    std::ostringstream os;
    os << "metric = " << metric << "\n";
    os << "lambda_poly = " << lambda_poly << "\n";
    os << "f_poly = " << f_poly << "\n";
    os << "metric_file = " << metric_file << "\n";
    os << "mu = " << fmt_double(mu) << "\n";
    os << "lambdaL = " << fmt_double(lambdaL) << "\n";
    os << "n1 = " << n1 << "\n";
    os << "n2 = " << n2 << "\n";
    os << "n3 = " << n3 << "\n";
    os << "L1 = " << fmt_double(L1) << "\n";
    os << "L2 = " << fmt_double(L2) << "\n";
    os << "tol = " << fmt_double(tol) << "\n";
    os << "admit_tol = " << fmt_double(admit_tol) << "\n";
    os << "h = " << fmt_double(h) << "\n";
    os << "h_list = " << h_list << "\n";
    os << "gtol = " << fmt_double(gtol) << "\n";
    os << "max_iters = " << max_iters << "\n";
    os << "memory = " << memory << "\n";
    os << "penalty = " << fmt_double(penalty) << "\n";
    os << "family = " << family << "\n";
    os << "v_poly = " << v_poly << "\n";
    os << "w1_poly = " << w1_poly << "\n";
    os << "w2_poly = " << w2_poly << "\n";
    os << "w3_poly = " << w3_poly << "\n";
    os << "V1_poly = " << V1_poly << "\n";
    os << "V2_poly = " << V2_poly << "\n";
    os << "V3_poly = " << V3_poly << "\n";
    os << "S11_poly = " << S11_poly << "\n";
    os << "S12_poly = " << S12_poly << "\n";
    os << "S22_poly = " << S22_poly << "\n";
    os << "F2 = " << F2 << "\n";
    os << "at = " << at << "\n";
    os << "out = " << out << "\n";
    return os.str();
}

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
    ExperimentConfig cfg;
    using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;
    static const std::map<std::string, Setter> setters = {
        {"metric", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.metric = v; }},
        {"lambda_poly", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.lambda_poly = v; }},
        {"f_poly", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.f_poly = v; }},
        {"metric_file", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.metric_file = v; }},
        {"mu", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.mu = parse_double(k, v); }},
        {"lambdaL", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.lambdaL = parse_double(k, v); }},
        {"n1", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.n1 = parse_int(k, v); }},
        {"n2", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.n2 = parse_int(k, v); }},
        {"n3", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.n3 = parse_int(k, v); }},
        {"L1", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.L1 = parse_double(k, v); }},
        {"L2", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.L2 = parse_double(k, v); }},
        {"tol", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.tol = parse_double(k, v); }},
        {"admit_tol", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.admit_tol = parse_double(k, v); }},
        {"h", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.h = parse_double(k, v); }},
        {"h_list", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.h_list = v; }},
        {"gtol", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.gtol = parse_double(k, v); }},
        {"max_iters", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.max_iters = parse_int(k, v); }},
        {"memory", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.memory = parse_int(k, v); }},
        {"penalty", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.penalty = parse_double(k, v); }},
        {"family", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.family = v; }},
        {"v_poly", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.v_poly = v; }},
        {"w1_poly", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.w1_poly = v; }},
        {"w2_poly", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.w2_poly = v; }},
        {"w3_poly", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.w3_poly = v; }},
        {"V1_poly", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.V1_poly = v; }},
        {"V2_poly", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.V2_poly = v; }},
        {"V3_poly", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.V3_poly = v; }},
        {"S11_poly", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.S11_poly = v; }},
        {"S12_poly", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.S12_poly = v; }},
        {"S22_poly", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.S22_poly = v; }},
        {"F2", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.F2 = v; }},
        {"at", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.at = v; }},
        {"out", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.out = v; }},
    };

    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected 'key = value', got '" + t + "'");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
        it->second(cfg, key, value);
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_text(os.str());
}

std::vector<double> ExperimentConfig::h_values() const {
    std::vector<double> hs;
    std::istringstream is(h_list);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        const std::string t = trim(tok);
        if (t.empty()) continue;
        hs.push_back(parse_double("h_list", t));
    }
    if (hs.empty()) throw std::invalid_argument("h_list contains no thickness values");
    return hs;
}

double ExperimentConfig::classify_tol(const MetricField& metric_field) const {
    if (tol > 0.0) return tol;
    return default_classify_tol(metric_field);
}

MetricField make_metric(const ExperimentConfig& cfg) {
    const Domain dom{cfg.L1, cfg.L2};
    if (cfg.metric == "identity") return MetricField::identity(dom);
    if (cfg.metric == "diag_lambda") return MetricField::diag_lambda(Polynomial2::parse(cfg.lambda_poly), dom);
    if (cfg.metric == "conformal_lambda") return MetricField::conformal_lambda(Polynomial2::parse(cfg.f_poly), dom);
    if (cfg.metric == "sampled") {
        if (cfg.metric_file.empty()) throw std::invalid_argument("metric = sampled requires metric_file");
        return MetricField::read_csv(cfg.metric_file);
    }
    throw std::invalid_argument("unknown metric kind '" + cfg.metric +
                                "' (expected identity, diag_lambda, conformal_lambda, or sampled)");
}

ElasticModel make_model(const ExperimentConfig& cfg) {
    ElasticModel model;
    model.mu = cfg.mu;
    model.lambdaL = cfg.lambdaL;
    model.validate();
    return model;
}

}  // namespace plates
