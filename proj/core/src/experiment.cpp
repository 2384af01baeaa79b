#include "ogplab/experiment.hpp"

#include "ogplab/error.hpp"
#include "ogplab/gray_scan.hpp"
#include "ogplab/qaoa.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace ogplab {

namespace {

struct NamedFamily {
    Family family;
    const char* name;
};
constexpr NamedFamily kFamilies[] = {
    {Family::ErNm, "er_nm"},         {Family::ErNp, "er_np"},           {Family::Regular, "regular"},
    {Family::DenseSk, "dense_sk"},   {Family::DenseQspin, "dense_qspin"},
};

struct NamedBackend {
    Backend backend;
    const char* name;
};
constexpr NamedBackend kBackends[] = {
    {Backend::Auto, "auto"}, {Backend::Exhaustive, "exhaustive"}, {Backend::BranchAndBound, "bnb"}};

bool is_dense(Family f) { return f == Family::DenseSk || f == Family::DenseQspin; }

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

} // namespace

std::string to_string(Family f) {
    for (const auto& e : kFamilies) {
        if (e.family == f) {
            return e.name;
        }
    }
    return "?";
}

Family parse_family(const std::string& s) {
    for (const auto& e : kFamilies) {
        if (s == e.name) {
            return e.family;
        }
    }
    throw ConfigError(fmt::format("unknown family '{}' (er_nm, er_np, regular, dense_sk, dense_qspin)", s));
}

std::string to_string(Backend b) {
    for (const auto& e : kBackends) {
        if (e.backend == b) {
            return e.name;
        }
    }
    return "?";
}

Backend parse_backend(const std::string& s) {
    for (const auto& e : kBackends) {
        if (s == e.name) {
            return e.backend;
        }
    }
    throw ConfigError(fmt::format("unknown solver backend '{}' (auto, exhaustive, bnb)", s));
}

namespace {

void reject_unknown(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (allowed.count(key) == 0) {
            throw ConfigError(fmt::format("unknown key '{}{}'", where, key));
        }
    }
}

template <typename T>
T read_key(const YAML::Node& node, const std::string& key, const std::string& where) {
    try {
        return node[key].as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(fmt::format("key '{}{}' has the wrong type", where, key));
    }
}

template <typename T>
void read_into(const YAML::Node& node, const std::string& key, const std::string& where, T& out) {
    if (node[key]) {
        out = read_key<T>(node, key, where);
    }
}

template <typename T>
void read_into(const YAML::Node& node, const std::string& key, const std::string& where, std::optional<T>& out) {
    if (node[key]) {
        out = read_key<T>(node, key, where);
    }
}

YAML::Node block(const YAML::Node& root, const std::string& key, const std::set<std::string>& allowed) {
    const YAML::Node b = root[key];
    if (b && !b.IsMap()) {
        throw ConfigError(fmt::format("'{}' must be a mapping", key));
    }
    if (b) {
        reject_unknown(b, key + ".", allowed);
    }
    return b;
}

} // namespace

ExperimentConfig parse_config(const std::string& yaml) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config is not valid YAML: ") + e.what());
    }
    if (!root.IsMap()) {
        throw ConfigError("config must be a YAML mapping");
    }
    reject_unknown(root, "", {"family", "n", "q", "m", "edge_prob", "d", "regularize", "threshold", "solver",
                              "gap", "overlap", "qaoa", "trials", "base_seed", "output"});

    ExperimentConfig cfg;
    if (!root["family"]) {
        throw ConfigError("missing key 'family'");
    }
    cfg.family = parse_family(read_key<std::string>(root, "family", ""));
    if (!root["n"]) {
        throw ConfigError("missing key 'n'");
    }
    cfg.n = read_key<std::size_t>(root, "n", "");
    cfg.q = cfg.family == Family::DenseSk ? 2 : 3;
    read_into(root, "q", "", cfg.q);
    read_into(root, "m", "", cfg.m);
    read_into(root, "edge_prob", "", cfg.edge_prob);
    read_into(root, "d", "", cfg.d);
    read_into(root, "trials", "", cfg.trials);
    read_into(root, "base_seed", "", cfg.base_seed);
    read_into(root, "output", "", cfg.output);

    if (const auto r = block(root, "regularize", {"lambda", "radius"})) {
        RegularizeBlock rb;
        if (!r["lambda"]) {
            throw ConfigError("missing key 'regularize.lambda'");
        }
        read_into(r, "lambda", "regularize.", rb.lambda);
        read_into(r, "radius", "regularize.", rb.radius);
        cfg.regularize = rb;
    }

    if (root["threshold"] && root["threshold"].IsScalar()) {
        cfg.threshold = ThresholdSpec::ratio(read_key<double>(root, "threshold", ""));
    } else if (const auto t = block(root, "threshold", {"mode", "value"})) {
        std::string mode = "ratio";
        read_into(t, "mode", "threshold.", mode);
        if (mode == "ratio") {
            cfg.threshold.mode = ThresholdMode::Ratio;
        } else if (mode == "additive") {
            cfg.threshold.mode = ThresholdMode::AdditivePerSite;
        } else {
            throw ConfigError(fmt::format("unknown threshold mode '{}' (ratio, additive)", mode));
        }
        read_into(t, "value", "threshold.", cfg.threshold.value);
    }

    if (const auto s = block(root, "solver", {"backend", "node_budget", "exhaustive_cap", "member_cap"})) {
        if (s["backend"]) {
            cfg.backend = parse_backend(read_key<std::string>(s, "backend", "solver."));
        }
        read_into(s, "node_budget", "solver.", cfg.node_budget);
        read_into(s, "exhaustive_cap", "solver.", cfg.exhaustive_cap);
        read_into(s, "member_cap", "solver.", cfg.member_cap);
    }
    if (const auto g = block(root, "gap", {"min_width", "min_support"})) {
        read_into(g, "min_width", "gap.", cfg.gap.min_width);
        read_into(g, "min_support", "gap.", cfg.gap.min_support);
    }
    if (const auto o = block(root, "overlap", {"absolute", "canonicalize"})) {
        read_into(o, "absolute", "overlap.", cfg.absolute);
        read_into(o, "canonicalize", "overlap.", cfg.canonicalize);
    }
    if (const auto qb = block(root, "qaoa", {"p", "resolution"})) {
        QaoaBlock b;
        read_into(qb, "p", "qaoa.", b.p);
        read_into(qb, "resolution", "qaoa.", b.resolution);
        cfg.qaoa = b;
    }
    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("cannot open config '{}'", path));
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate(const ExperimentConfig& cfg) {
    const std::size_t n = cfg.n;
    const std::size_t q = cfg.q;
    if (n == 0) {
        throw ConfigError("n must be positive");
    }
    if (q < 2 || q > n) {
        throw ConfigError(fmt::format("q must satisfy 2 <= q <= n, got q={} n={}", q, n));
    }
    auto forbid = [&](bool present, const char* key) {
        if (present) {
            throw ConfigError(fmt::format("key '{}' does not apply to family {}", key, to_string(cfg.family)));
        }
    };
    switch (cfg.family) {
    case Family::ErNm:
        if (!cfg.m) {
            throw ConfigError("family er_nm needs 'm'");
        }
        if (*cfg.m > binomial(n, q)) {
            throw ConfigError(fmt::format("m = {} exceeds C({}, {})", *cfg.m, n, q));
        }
        forbid(cfg.edge_prob.has_value(), "edge_prob");
        forbid(cfg.d.has_value(), "d");
        break;
    case Family::ErNp:
        if (!cfg.edge_prob) {
            throw ConfigError("family er_np needs 'edge_prob'");
        }
        if (!(*cfg.edge_prob >= 0.0 && *cfg.edge_prob <= 1.0)) {
            throw ConfigError("edge_prob must lie in [0, 1]");
        }
        forbid(cfg.m.has_value(), "m");
        forbid(cfg.d.has_value(), "d");
        break;
    case Family::Regular:
        if (!cfg.d) {
            throw ConfigError("family regular needs 'd'");
        }
        if ((n * *cfg.d) % q != 0) {
            throw ConfigError(fmt::format("regular family needs q | n*d; n*d = {} and q = {}", n * *cfg.d, q));
        }
        if (*cfg.d > binomial(n - 1, q - 1)) {
            throw ConfigError(fmt::format("d = {} exceeds C(n-1, q-1) = {}", *cfg.d, binomial(n - 1, q - 1)));
        }
        forbid(cfg.m.has_value(), "m");
        forbid(cfg.edge_prob.has_value(), "edge_prob");
        break;
    case Family::DenseSk:
        if (q != 2) {
            throw ConfigError("family dense_sk has q = 2");
        }
        [[fallthrough]];
    case Family::DenseQspin:
        if (n < 2) {
            throw ConfigError("dense families need n >= 2");
        }
        forbid(cfg.m.has_value(), "m");
        forbid(cfg.edge_prob.has_value(), "edge_prob");
        forbid(cfg.d.has_value(), "d");
        if (binomial(n, q) > (std::uint64_t{1} << 28)) {
            throw ConfigError(fmt::format("C({}, {}) couplings is too many to store", n, q));
        }
        break;
    }
    if (cfg.regularize) {
        if (cfg.family != Family::ErNm && cfg.family != Family::ErNp) {
            throw ConfigError("regularize applies to the er_nm and er_np families");
        }
        if (!(cfg.regularize->lambda >= 2.0)) {
            throw ConfigError("regularize.lambda must be >= 2");
        }
    }
    try {
        cfg.threshold.validate();
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }
    if (!(cfg.gap.min_width > 0.0 && cfg.gap.min_width < 2.0)) {
        throw ConfigError("gap.min_width must lie in (0, 2)");
    }
    if (cfg.member_cap == 0) {
        throw ConfigError("solver.member_cap must be positive");
    }
    const bool bnb_ok = n <= 64 && (!is_dense(cfg.family) || q == 2);
    const bool scan_ok = n <= std::min(cfg.exhaustive_cap, kGrayScanLimit);
    if (cfg.backend == Backend::BranchAndBound && !bnb_ok) {
        throw ConfigError("branch and bound needs n <= 64 and, for dense families, q = 2");
    }
    if (cfg.backend == Backend::Exhaustive && !scan_ok) {
        throw ConfigError(fmt::format("exhaustive backend needs n <= solver.exhaustive_cap ({})",
                                      std::min(cfg.exhaustive_cap, kGrayScanLimit)));
    }
    if (cfg.backend == Backend::Auto && !bnb_ok && !scan_ok) {
        throw ConfigError("no solver backend handles this size; lower n or raise solver.exhaustive_cap");
    }
    if (cfg.qaoa) {
        if (n > qaoa::kMaxQubits) {
            throw ConfigError(fmt::format("qaoa block needs n <= {}", qaoa::kMaxQubits));
        }
        if (cfg.qaoa->resolution == 0) {
            throw ConfigError("qaoa.resolution must be positive");
        }
    }
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
    using nlohmann::json;
    json j = {{"family", to_string(cfg.family)}, {"n", cfg.n}, {"q", cfg.q}};
    if (cfg.m) {
        j["m"] = *cfg.m;
    }
    if (cfg.edge_prob) {
        j["edge_prob"] = *cfg.edge_prob;
    }
    if (cfg.d) {
        j["d"] = *cfg.d;
    }
    if (cfg.regularize) {
        j["regularize"] = {{"lambda", cfg.regularize->lambda}, {"radius", cfg.regularize->radius}};
    }
    j["threshold"] = {{"mode", cfg.threshold.mode == ThresholdMode::Ratio ? "ratio" : "additive"},
                      {"value", cfg.threshold.value}};
    j["solver"] = {{"backend", to_string(cfg.backend)},
                   {"node_budget", cfg.node_budget},
                   {"exhaustive_cap", cfg.exhaustive_cap},
                   {"member_cap", cfg.member_cap}};
    j["overlap"] = {{"absolute", cfg.absolute}, {"canonicalize", cfg.canonicalize}};
    j["gap"] = {{"min_width", cfg.gap.min_width},
                {"min_support", cfg.gap.min_support ? json(*cfg.gap.min_support) : json(nullptr)}};
    if (cfg.qaoa) {
        j["qaoa"] = {{"p", cfg.qaoa->p}, {"resolution", cfg.qaoa->resolution}};
    }
    j["trials"] = cfg.trials;
    j["base_seed"] = cfg.base_seed;
    return j;
}

Instance make_instance(const ExperimentConfig& cfg, Seed trial_seed, std::optional<RegularizeReport>* report) {
    const Seed couplings = derive_seed(trial_seed, "couplings");
    if (cfg.family == Family::DenseSk) {
        return DenseSpinInstance::sk(cfg.n, couplings);
    }
    if (cfg.family == Family::DenseQspin) {
        return DenseSpinInstance::qspin(cfg.n, cfg.q, couplings);
    }
    const Seed graph_seed = derive_seed(trial_seed, "graph");
    Hypergraph g = [&] {
        switch (cfg.family) {
        case Family::ErNm: return gen_er_nm(cfg.n, *cfg.m, cfg.q, graph_seed);
        case Family::ErNp: return gen_er_np(cfg.n, *cfg.edge_prob, cfg.q, graph_seed);
        default: return gen_regular(cfg.n, *cfg.d, cfg.q, graph_seed);
        }
    }();
    if (cfg.regularize) {
        auto r = ogplab::regularize(g, cfg.regularize->lambda, cfg.regularize->radius,
                                    derive_seed(trial_seed, "regularize"));
        g = std::move(r.graph);
        if (report != nullptr) {
            *report = r.report;
        }
    }
    return random_couplings(g, couplings);
}

TrialRow run_trial(const ExperimentConfig& cfg, std::size_t index) {
    const auto start = std::chrono::steady_clock::now();
    TrialRow row;
    row.index = index;
    row.seed = cfg.base_seed + index;
    try {
        const Instance inst = make_instance(cfg, row.seed, &row.regularize);
        if (const auto* x = std::get_if<XorsatInstance>(&inst)) {
            row.num_edges = x->num_edges();
        }
        SolveOptions so;
        so.exhaustive_cap = cfg.exhaustive_cap;
        so.member_cap = cfg.member_cap;
        so.node_budget = cfg.node_budget;
        so.seed = derive_seed(row.seed, "search");
        SolutionSet s = solve_near_optimal(inst, cfg.threshold, cfg.backend, so);
        if (cfg.canonicalize && s.z2_symmetric && !s.z2_canonical) {
            s = canonicalize_z2(std::move(s));
        }
        row.optimum = s.optimum;
        row.threshold = s.threshold;
        row.integral = s.integral;
        row.members = s.size();
        row.exhaustive = s.exhaustive;
        row.z2_canonical = s.z2_canonical;
        row.nodes = s.nodes;
        if (s.size() >= 2) {
            row.spectrum = pairwise_overlaps(s, {cfg.absolute, false, 1});
            row.gap = detect_gap(*row.spectrum, cfg.gap);
        } else {
            row.gap.min_support = cfg.gap.min_support.value_or(default_min_support(0));
        }
        if (cfg.qaoa) {
            const auto best = qaoa::grid_search(inst, cfg.qaoa->p, cfg.qaoa->resolution);
            row.qaoa = QaoaSummary{cfg.qaoa->p, best.value, s.optimum != 0.0 ? best.value / s.optimum : 0.0,
                                   best.params.gammas, best.params.betas};
        }
        row.ok = true;
    } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
    }
    row.elapsed_ms = elapsed_ms(start);
    return row;
}

namespace {

nlohmann::json cost_value(double c, bool integral) {
    if (integral) {
        return static_cast<long long>(std::llround(c));
    }
    return c;
}

nlohmann::json gap_json(const GapReport& g) {
    return {{"found", g.found},
            {"mu1", g.mu1},
            {"mu2", g.mu2},
            {"width", g.width},
            {"support_below", g.support_below},
            {"support_above", g.support_above},
            {"min_support", g.min_support}};
}

nlohmann::json regularize_json(const RegularizeReport& r) {
    return {{"lambda_input", r.lambda_input},         {"lambda_prime", r.lambda_prime},
            {"edges_removed", r.edges_removed},       {"edges_added", r.edges_added},
            {"removed_fraction", r.removed_fraction}, {"treelike_before", r.treelike_before},
            {"treelike_after", r.treelike_after},     {"leftover_deficit", r.leftover_deficit}};
}

} // namespace

nlohmann::json trial_json(const TrialRow& row) {
    using nlohmann::json;
    json j = {{"record", "trial"}, {"index", row.index}, {"seed", row.seed}, {"status", row.ok ? "ok" : "error"}};
    if (!row.ok) {
        j["error"] = row.error;
        j["elapsed_ms"] = row.elapsed_ms;
        return j;
    }
    j["edges"] = row.num_edges;
    j["optimum"] = cost_value(row.optimum, row.integral);
    j["threshold"] = cost_value(row.threshold, row.integral);
    j["members"] = row.members;
    j["exhaustive"] = row.exhaustive;
    j["z2_canonical"] = row.z2_canonical;
    j["nodes"] = row.nodes;
    j["gap"] = gap_json(row.gap);
    if (row.spectrum) {
        json counts = json::array();
        for (std::size_t k = 0; k < row.spectrum->counts.size(); ++k) {
            if (row.spectrum->counts[k] != 0) {
                counts.push_back({k, row.spectrum->counts[k]});
            }
        }
        j["spectrum"] = {{"n", row.spectrum->n}, {"absolute", row.spectrum->absolute}, {"counts", counts}};
    } else {
        j["spectrum"] = nullptr;
    }
    if (row.regularize) {
        j["regularize"] = regularize_json(*row.regularize);
    }
    if (row.qaoa) {
        j["qaoa"] = {{"p", row.qaoa->p},
                     {"value", row.qaoa->value},
                     {"ratio", row.qaoa->ratio},
                     {"gamma", row.qaoa->gammas},
                     {"beta", row.qaoa->betas}};
    }
    j["elapsed_ms"] = row.elapsed_ms;
    return j;
}

nlohmann::json aggregate_json(const RunRecord& rec) {
    return {{"record", "aggregate"},
            {"trials", rec.trials.size()},
            {"completed", rec.completed},
            {"failed", rec.failed},
            {"gap_found", rec.gap_found},
            {"gap_fraction", rec.gap_fraction ? nlohmann::json(*rec.gap_fraction) : nlohmann::json(nullptr)},
            {"elapsed_ms", rec.elapsed_ms}};
}

RunRecord run_experiment(const ExperimentConfig& cfg, std::ostream& out, const RunOptions& opts) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    RunRecord rec;
    rec.config = cfg;
    rec.trials.resize(cfg.trials);

    nlohmann::json head = {{"record", "config"}, {"config", config_json(cfg)}};
    for (const auto& [k, v] : opts.annotate.items()) {
        head[k] = v;
    }
    out << head.dump() << '\n' << std::flush;

    // Rows finish in any order; the writer emits the longest finished prefix.
    std::mutex mu;
    std::vector<char> done(cfg.trials, 0);
    std::size_t written = 0;
    auto publish = [&](std::size_t i, TrialRow row) {
        std::lock_guard lock(mu);
        rec.trials[i] = std::move(row);
        done[i] = 1;
        while (written < cfg.trials && done[written] != 0) {
            out << trial_json(rec.trials[written]).dump() << '\n' << std::flush;
            ++written;
        }
    };

    const unsigned workers = std::max(1U, std::min<unsigned>(opts.workers, static_cast<unsigned>(cfg.trials)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < cfg.trials; ++i) {
            publish(i, run_trial(cfg, i));
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < cfg.trials; i = next++) {
                    publish(i, run_trial(cfg, i));
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    for (const auto& row : rec.trials) {
        if (row.ok) {
            ++rec.completed;
            rec.gap_found += row.gap.found ? 1 : 0;
        } else {
            ++rec.failed;
        }
    }
    if (rec.completed > 0) {
        rec.gap_fraction = static_cast<double>(rec.gap_found) / static_cast<double>(rec.completed);
    }
    rec.elapsed_ms = elapsed_ms(start);
    out << aggregate_json(rec).dump() << '\n' << std::flush;
    return rec;
}

RunRecord run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
    if (cfg.output.empty()) {
        std::ostringstream sink;
        return run_experiment(cfg, sink, opts);
    }
    std::ofstream out(cfg.output);
    if (!out) {
        throw ConfigError(fmt::format("cannot open output '{}'", cfg.output));
    }
    return run_experiment(cfg, out, opts);
}

std::vector<std::string> sweep_axes() {
    return {"n", "q", "m", "d", "edge_prob", "trials", "threshold", "min_width", "min_support", "node_budget"};
}

ExperimentConfig with_axis_value(const ExperimentConfig& cfg, const std::string& axis, double value) {
    ExperimentConfig c = cfg;
    auto count = [&] {
        if (!(value >= 0.0) || value != std::floor(value)) {
            throw ConfigError(fmt::format("axis '{}' takes non-negative integers, got {}", axis, value));
        }
        return static_cast<std::size_t>(value);
    };
    if (axis == "n") {
        c.n = count();
    } else if (axis == "q") {
        c.q = count();
    } else if (axis == "m") {
        c.m = count();
    } else if (axis == "d") {
        c.d = count();
    } else if (axis == "edge_prob") {
        c.edge_prob = value;
    } else if (axis == "trials") {
        c.trials = count();
    } else if (axis == "threshold") {
        c.threshold.value = value;
    } else if (axis == "min_width") {
        c.gap.min_width = value;
    } else if (axis == "min_support") {
        c.gap.min_support = count();
    } else if (axis == "node_budget") {
        c.node_budget = count();
    } else {
        throw ConfigError(fmt::format("'{}' is not a sweepable numeric field", axis));
    }
    validate(c);
    return c;
}

std::vector<RunRecord> sweep(const ExperimentConfig& tmpl, const std::string& axis, const std::vector<double>& values,
                             std::ostream& out, const RunOptions& opts) {
    const auto axes = sweep_axes();
    if (std::find(axes.begin(), axes.end(), axis) == axes.end()) {
        throw ConfigError(fmt::format("'{}' is not a sweepable numeric field", axis));
    }
    // Validate every point up front so a bad value fails before any work is done.
    std::vector<ExperimentConfig> configs;
    for (const double v : values) {
        configs.push_back(with_axis_value(tmpl, axis, v));
    }
    std::vector<RunRecord> runs;
    for (std::size_t i = 0; i < values.size(); ++i) {
        RunOptions o = opts;
        o.annotate["sweep"] = {{"axis", axis}, {"value", values[i]}, {"point", i}};
        runs.push_back(run_experiment(configs[i], out, o));
    }
    return runs;
}

void export_spectrum(const std::string& record_path, std::size_t index, std::ostream& csv) {
    std::ifstream in(record_path);
    if (!in) {
        throw LookupError(fmt::format("run file '{}' not found", record_path));
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception&) {
            throw FormatError(fmt::format("{}:{}: not a JSON record", record_path, line_no));
        }
        if (rec.value("record", "") != "trial" || rec.value("index", std::size_t{0}) != index) {
            continue;
        }
        OverlapSpectrum s;
        const auto sp = rec.find("spectrum");
        if (sp != rec.end() && !sp->is_null()) {
            s.n = sp->at("n").get<std::size_t>();
            s.absolute = sp->at("absolute").get<bool>();
            s.counts.assign(s.n + 1, 0);
            for (const auto& kc : sp->at("counts")) {
                s.counts.at(kc.at(0).get<std::size_t>()) = kc.at(1).get<std::uint64_t>();
            }
        }
        write_spectrum_csv(csv, s);
        return;
    }
    throw LookupError(fmt::format("no trial with index {} in '{}'", index, record_path));
}

std::string strip_timing(const std::string& jsonl) {
    std::istringstream in(jsonl);
    std::string out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto rec = nlohmann::json::parse(line);
        rec.erase("elapsed_ms");
        out += rec.dump();
        out += '\n';
    }
    return out;
}

} // namespace ogplab
