#pragma once

// Experiment configuration: flat key-value text with [section] headers and
// '#' comments. Parsing and serialisation round-trip losslessly.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "spectra_cert/errors.hpp"

namespace spectra_cert {

struct ExperimentConfig {
    // [experiment]
    std::string kind;  // geometric_sweep | sbm_hierarchy | sbm_threshold |
                       // dsbm_path | dsbm_cycle | fixture | file
    int trials = 1;
    std::uint64_t master_seed = 0;
    int k = 2;
    int k_tilde = 0;  // eigenvectors in the embedding; 0 = default per kind
    std::string representation = "auto";
    std::string scaling = "cluster_constant";
    std::vector<int> groups;  // optional explicit boundaries (interior cuts included)
    std::string out;

    // [sweep]
    std::string variable;
    std::vector<double> values;

    // [params] free-form generator parameters
    std::map<std::string, std::string> params;

    double param_d(const std::string& key, double dflt) const {
        auto it = params.find(key);
        if (it == params.end()) return dflt;
        try {
            return std::stod(it->second);
        } catch (const std::exception&) {
            throw InputError("config param '" + key + "' is not a number");
        }
    }
    int param_i(const std::string& key, int dflt) const {
        auto it = params.find(key);
        if (it == params.end()) return dflt;
        try {
            return std::stoi(it->second);
        } catch (const std::exception&) {
            throw InputError("config param '" + key + "' is not an integer");
        }
    }
    std::string param_s(const std::string& key, const std::string& dflt) const {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

inline ExperimentConfig parse_experiment_config(std::istream& in,
                                                const std::string& origin = "<config>") {
    ExperimentConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw InputError(origin + ":" + std::to_string(lineno) + ": bad section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw InputError(origin + ":" + std::to_string(lineno) + ": empty key");
        try {
            if (section == "experiment") {
                if (key == "kind") cfg.kind = val;
                else if (key == "trials") cfg.trials = std::stoi(val);
                else if (key == "master_seed") cfg.master_seed = std::stoull(val);
                else if (key == "k") cfg.k = std::stoi(val);
                else if (key == "k_tilde") cfg.k_tilde = std::stoi(val);
                else if (key == "representation") cfg.representation = val;
                else if (key == "scaling") cfg.scaling = val;
                else if (key == "out") cfg.out = val;
                else if (key == "groups") {
                    for (const auto& t : detail::split_list(val))
                        cfg.groups.push_back(std::stoi(t));
                } else
                    throw InputError("unknown key '" + key + "' in [experiment]");
            } else if (section == "sweep") {
                if (key == "variable") cfg.variable = val;
                else if (key == "values") {
                    for (const auto& t : detail::split_list(val))
                        cfg.values.push_back(std::stod(t));
                } else
                    throw InputError("unknown key '" + key + "' in [sweep]");
            } else if (section == "params") {
                cfg.params[key] = val;
            } else {
                throw InputError("unknown section '" + section + "'");
            }
        } catch (const InputError&) {
            throw;
        } catch (const std::exception&) {
            throw InputError(origin + ":" + std::to_string(lineno) + ": bad value for '" +
                             key + "'");
        }
    }
    if (cfg.kind.empty()) throw InputError(origin + ": missing experiment kind");
    if (cfg.trials < 1) throw InputError(origin + ": trials must be >= 1");
    if (cfg.values.empty()) throw InputError(origin + ": sweep values must be nonempty");
    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config: " + path);
    return parse_experiment_config(in, path);
}

inline void write_experiment_config(const ExperimentConfig& cfg, std::ostream& out) {
    out << "[experiment]\n";
    out << "kind = " << cfg.kind << "\n";
    out << "trials = " << cfg.trials << "\n";
    out << "master_seed = " << cfg.master_seed << "\n";
    out << "k = " << cfg.k << "\n";
    out << "k_tilde = " << cfg.k_tilde << "\n";
    out << "representation = " << cfg.representation << "\n";
    out << "scaling = " << cfg.scaling << "\n";
    if (!cfg.groups.empty()) {
        out << "groups = ";
        for (std::size_t i = 0; i < cfg.groups.size(); ++i)
            out << (i ? "," : "") << cfg.groups[i];
        out << "\n";
    }
    if (!cfg.out.empty()) out << "out = " << cfg.out << "\n";
    out << "\n[sweep]\n";
    out << "variable = " << cfg.variable << "\n";
    out << "values = ";
    for (std::size_t i = 0; i < cfg.values.size(); ++i)
        out << (i ? "," : "") << detail::fmt_double(cfg.values[i]);
    out << "\n";
    if (!cfg.params.empty()) {
        out << "\n[params]\n";
        for (const auto& [k, v] : cfg.params) out << k << " = " << v << "\n";
    }
}

}  // namespace spectra_cert
