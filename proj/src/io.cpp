#include "ising/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ising {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

json edges_json(const ConnectivityMatrix& w) {
    json edges = json::array();
    for (const auto& [i, j] : w.edge_pairs()) {
        edges.push_back(json::array({i, j, w(i, j)}));
    }
    return edges;
}

}  // namespace

std::string connectivity_to_json(const ConnectivityMatrix& w) {
    json doc;
    doc["p"] = w.p();
    doc["edges"] = edges_json(w);
    return doc.dump(2) + "\n";
}

ConnectivityMatrix connectivity_from_json(const std::string& text) {
    const json doc = json::parse(text);
    const int p = doc.at("p").get<int>();
    if (p < 1) throw std::invalid_argument("node count must be >= 1");
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(p, p);
    for (const auto& e : doc.at("edges")) {
        const int i = e.at(0).get<int>();
        const int j = e.at(1).get<int>();
        const double weight = e.at(2).get<double>();
        if (i < 0 || j < 0 || i >= p || j >= p || i >= j) {
            throw std::invalid_argument("edges must satisfy 0 <= i < j < p");
        }
        if (w(i, j) != 0.0) throw std::invalid_argument("duplicate edge in model file");
        w(i, j) = w(j, i) = weight;
    }
    return ConnectivityMatrix(std::move(w));
}

void save_connectivity(const ConnectivityMatrix& w, const std::filesystem::path& path) {
    write_file(path, connectivity_to_json(w));
}

ConnectivityMatrix load_connectivity(const std::filesystem::path& path) {
    return connectivity_from_json(read_file(path));
}

void save_samples_csv(const SampleSet& samples, const std::filesystem::path& path, bool header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    if (header) {
        for (int j = 0; j < samples.p(); ++j) out << (j ? "," : "") << 'z' << j;
        out << '\n';
    }
    for (int i = 0; i < samples.n(); ++i) {
        for (int j = 0; j < samples.p(); ++j) {
            out << (j ? "," : "") << (samples.data()(i, j) > 0 ? "1" : "-1");
        }
        out << '\n';
    }
}

SampleSet load_samples_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first && line.find('z') != std::string::npos) {
            first = false;  // header line
            continue;
        }
        first = false;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            const int v = std::stoi(tok);
            if (v != 1 && v != -1) throw std::invalid_argument("sample entries must be -1 or 1");
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw std::invalid_argument("ragged rows in sample file");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("empty sample file");
    Eigen::MatrixXd data(rows.size(), rows.front().size());
    for (size_t i = 0; i < rows.size(); ++i) {
        for (size_t j = 0; j < rows[i].size(); ++j) data(i, j) = rows[i][j];
    }
    return SampleSet(std::move(data));
}

std::string estimate_to_json(const GraphEstimate& est) {
    json doc;
    doc["p"] = est.w_hat.p();
    doc["edges"] = edges_json(est.w_hat);
    json params;
    params["method"] = method_token(est.method);
    if (is_l0_method(est.method)) {
        params["k"] = est.k;
    } else {
        params["lambda_by_node"] = est.lambda_by_node;
    }
    doc["params"] = params;
    return doc.dump(2) + "\n";
}

void save_estimate(const GraphEstimate& est, const std::filesystem::path& path) {
    write_file(path, estimate_to_json(est));
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
    const json doc = json::parse(text);
    ExperimentConfig config;

    const json& topo = doc.at("topology");
    const std::string kind = topo.at("kind").get<std::string>();
    if (kind == "lattice") {
        config.topology.kind = TopologySpec::Kind::Lattice;
        config.topology.coupling = topo.value("coupling", 0.5);
    } else if (kind == "random-regular") {
        config.topology.kind = TopologySpec::Kind::RandomRegular;
        config.topology.degree = topo.value("degree", 3);
        config.topology.weight_low = topo.value("weight_low", 0.7);
        config.topology.weight_high = topo.value("weight_high", 0.9);
    } else {
        throw std::invalid_argument("unknown topology kind: " + kind);
    }

    config.p_list = doc.at("p_list").get<std::vector<int>>();
    config.n_list = doc.at("n_list").get<std::vector<int>>();
    config.repetitions = doc.value("repetitions", 30);
    config.master_seed = doc.value("master_seed", 0ULL);
    config.workers = doc.value("workers", 0);

    for (const auto& m : doc.at("methods")) {
        MethodSpec spec;
        if (m.is_string()) {
            spec = MethodSpec::defaults(method_from_token(m.get<std::string>()));
        } else {
            spec = MethodSpec::defaults(method_from_token(m.at("method").get<std::string>()));
            if (m.contains("tuning")) {
                const std::string tuning = m.at("tuning").get<std::string>();
                if (tuning == "validation") {
                    spec.tuning = Tuning::ValidationLikelihood;
                } else if (tuning == "bic") {
                    spec.tuning = Tuning::Bic;
                } else {
                    throw std::invalid_argument("unknown tuning rule: " + tuning);
                }
            }
            if (m.contains("lambda_grid")) {
                spec.lambda_grid = m.at("lambda_grid").get<std::vector<double>>();
            }
            if (m.contains("k_grid")) spec.k_grid = m.at("k_grid").get<std::vector<int>>();
            spec.solve.epsilon = m.value("epsilon", spec.solve.epsilon);
            spec.solve.t_max = m.value("t_max", spec.solve.t_max);
            spec.solve.step_scale = m.value("step_scale", spec.solve.step_scale);
        }
        config.methods.push_back(std::move(spec));
    }

    if (doc.contains("sampler")) {
        const json& s = doc.at("sampler");
        SamplerConfig sc;
        const std::string method = s.value("method", "exact");
        if (method == "exact") {
            sc.method = SamplerMethod::Exact;
        } else if (method == "gibbs") {
            sc.method = SamplerMethod::Gibbs;
        } else {
            throw std::invalid_argument("unknown sampler method: " + method);
        }
        sc.gibbs_sweeps = s.value("sweeps", 1000);
        config.sampler = sc;
    }
    return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    return experiment_config_from_json(read_file(path));
}

std::vector<RunRecord> load_records_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::vector<RunRecord> records;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty records file");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        RunRecord r;
        std::getline(ss, tok, ',');
        r.method = method_from_token(tok);
        std::getline(ss, tok, ',');
        r.p = std::stoi(tok);
        std::getline(ss, tok, ',');
        r.n = std::stoi(tok);
        std::getline(ss, tok, ',');
        r.repetition = std::stoi(tok);
        std::getline(ss, tok, ',');
        r.seed = std::stoull(tok);
        std::getline(ss, tok, ',');
        r.recovered = tok == "1";
        std::getline(ss, tok, ',');
        r.l2_error = tok == "inf" ? std::numeric_limits<double>::infinity() : std::stod(tok);
        records.push_back(r);
    }
    return records;
}

}  // namespace ising
