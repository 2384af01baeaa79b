#include "ogplab/qaoa.hpp"

#include "ogplab/error.hpp"
#include "ogplab/gray_scan.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

namespace ogplab::qaoa {

void Params::validate() const {
    if (gammas.size() != betas.size()) {
        throw ParameterError(fmt::format("{} gammas but {} betas", gammas.size(), betas.size()));
    }
}

namespace {

void check_qubits(std::size_t n) {
    if (n > kMaxQubits) {
        throw CapacityError(fmt::format("statevector for n = {} exceeds the {}-qubit cap", n, kMaxQubits));
    }
}

template <typename F>
double tree_sum(std::size_t lo, std::size_t hi, const F& term) {
    if (hi - lo <= 64) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            s += term(i);
        }
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return tree_sum(lo, mid, term) + tree_sum(mid, hi, term);
}

/// Double-double value hi + lo.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;
};

DoubleDouble dd_add(DoubleDouble a, DoubleDouble b) {
    const double s = a.hi + b.hi;
    const double v = s - a.hi;
    const double err = (a.hi - (s - v)) + (b.hi - v) + a.lo + b.lo;
    const double hi = s + err;
    return {hi, err - (hi - s)};
}

DoubleDouble dd_product(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

template <class F>
DoubleDouble dd_tree_sum(std::size_t lo, std::size_t hi, const F& term) {
    if (hi - lo <= 64) {
        DoubleDouble s;
        for (std::size_t i = lo; i < hi; ++i) {
            s = dd_add(s, term(i));
        }
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return dd_add(dd_tree_sum(lo, mid, term), dd_tree_sum(mid, hi, term));
}

/// Correctly rounded (up to a final ulp) quotient of two double-doubles.
double dd_divide(DoubleDouble num, DoubleDouble den) {
    const double q = num.hi / den.hi;
    const double r = std::fma(-q, den.hi, num.hi) + num.lo - q * den.lo;
    return q + r / den.hi;
}

} // namespace

CostDiagonal build_cost_diagonal(const XorsatInstance& inst) {
    check_qubits(inst.n());
    CostDiagonal d(std::size_t{1} << inst.n());
    for_each_xorsat_cost(inst, [&](std::uint64_t b, std::size_t c) { d[b] = static_cast<double>(c); });
    return d;
}

CostDiagonal build_cost_diagonal(const DenseSpinInstance& inst) {
    check_qubits(inst.n());
    CostDiagonal d(std::size_t{1} << inst.n());
    for_each_dense_cost(inst, [&](std::uint64_t b, double c) { d[b] = c; });
    return d;
}

CostDiagonal build_cost_diagonal(const Instance& inst) {
    return std::visit([](const auto& i) { return build_cost_diagonal(i); }, inst);
}

Statevector uniform_state(std::size_t n) {
    check_qubits(n);
    const std::size_t dim = std::size_t{1} << n;
    return Statevector(dim, Amplitude(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
}

void apply_phase(Statevector& psi, const CostDiagonal& cost, double gamma) {
    if (psi.size() != cost.size()) {
        throw ContractViolation("statevector and cost diagonal differ in size");
    }
    for (std::size_t b = 0; b < psi.size(); ++b) {
        const double a = -gamma * cost[b];
        psi[b] *= Amplitude(std::cos(a), std::sin(a));
    }
}

void apply_mixer(Statevector& psi, std::size_t n, double beta) {
    const double c = std::cos(beta);
    const Amplitude ms(0.0, -std::sin(beta));
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t stride = std::size_t{1} << j;
        for (std::size_t base = 0; base < psi.size(); base += 2 * stride) {
            for (std::size_t i = base; i < base + stride; ++i) {
                const Amplitude a = psi[i];
                const Amplitude b = psi[i + stride];
                psi[i] = c * a + ms * b;
                psi[i + stride] = ms * a + c * b;
            }
        }
    }
}

Statevector state(const CostDiagonal& cost, std::size_t n, const Params& params, const LayerObserver& observer) {
    params.validate();
    Statevector psi = uniform_state(n);
    if (cost.size() != psi.size()) {
        throw ContractViolation("cost diagonal does not match the qubit count");
    }
    for (std::size_t layer = 0; layer < params.depth(); ++layer) {
        apply_phase(psi, cost, params.gammas[layer]);
        apply_mixer(psi, n, params.betas[layer]);
        if (observer) {
            observer(layer + 1, psi);
        }
    }
    return psi;
}

Statevector state(const Instance& inst, const Params& params) {
    return state(build_cost_diagonal(inst), instance_size(inst), params);
}

double norm_squared(const Statevector& psi) {
    const auto s = dd_tree_sum(0, psi.size(), [&](std::size_t b) { return DoubleDouble{std::norm(psi[b]), 0.0}; });
    return s.hi + s.lo;
}

double expectation(const Statevector& psi, const CostDiagonal& cost) {
    if (psi.size() != cost.size()) {
        throw ContractViolation("statevector and cost diagonal differ in size");
    }
    const auto num = dd_tree_sum(0, psi.size(), [&](std::size_t b) { return dd_product(std::norm(psi[b]), cost[b]); });
    const auto den = dd_tree_sum(0, psi.size(), [&](std::size_t b) { return DoubleDouble{std::norm(psi[b]), 0.0}; });
    return dd_divide(num, den);
}

double expectation(const Instance& inst, const Params& params) {
    const auto cost = build_cost_diagonal(inst);
    return expectation(state(cost, instance_size(inst), params), cost);
}

std::vector<double> magnetizations(const Statevector& psi, std::size_t n) {
    if (psi.size() != (std::size_t{1} << n)) {
        throw ContractViolation("statevector does not match the qubit count");
    }
    std::vector<double> m(n);
    for (std::size_t v = 0; v < n; ++v) {
        m[v] = tree_sum(0, psi.size(), [&](std::size_t b) {
            const double p = std::norm(psi[b]);
            return ((b >> v) & 1U) != 0 ? -p : p;
        });
    }
    return m;
}

GridResult grid_search(const CostDiagonal& cost, std::size_t n, std::size_t p, std::size_t resolution) {
    if (resolution == 0) {
        throw ParameterError("grid resolution must be positive");
    }
    const double r = static_cast<double>(resolution);
    auto gamma_at = [&](std::size_t k) { return std::numbers::pi * static_cast<double>(k) / r; };
    auto beta_at = [&](std::size_t k) { return 0.5 * std::numbers::pi * static_cast<double>(k) / r; };

    // Grid point: index 2l is gamma_l, index 2l+1 is beta_l.
    std::vector<std::size_t> idx(2 * p, 0);
    GridResult out;
    auto evaluate = [&](const std::vector<std::size_t>& at) {
        Params prm;
        for (std::size_t l = 0; l < p; ++l) {
            prm.gammas.push_back(gamma_at(at[2 * l]));
            prm.betas.push_back(beta_at(at[2 * l + 1]));
        }
        ++out.evaluations;
        const double v = expectation(state(cost, n, prm), cost);
        return std::pair{v, prm};
    };

    auto [v0, p0] = evaluate(idx);
    out.value = v0;
    out.params = p0;
    if (p == 0) {
        return out;
    }

    // Full grid over the first min(p, 2) layers; deeper layers start at (0, 0), which
    // is the identity, and are then refined by coordinate ascent.
    const std::size_t full = std::min<std::size_t>(p, 2);
    std::vector<std::size_t> at(2 * p, 0);
    while (true) {
        // Odometer over the leading 2*full coordinates, the last of them fastest.
        std::size_t i = 2 * full;
        while (i > 0 && ++at[i - 1] == resolution) {
            at[--i] = 0;
        }
        if (i == 0) {
            break;
        }
        auto [v, prm] = evaluate(at);
        if (v > out.value) {
            out.value = v;
            out.params = prm;
            idx = at;
        }
    }
    if (p <= 2) {
        return out;
    }

    for (int sweep = 0; sweep < 32; ++sweep) {
        bool improved = false;
        for (std::size_t c = 0; c < idx.size(); ++c) {
            auto trial = idx;
            for (std::size_t k = 0; k < resolution; ++k) {
                if (k == idx[c]) {
                    continue;
                }
                trial[c] = k;
                auto [v, prm] = evaluate(trial);
                if (v > out.value + 1e-12) {
                    out.value = v;
                    out.params = prm;
                    idx = trial;
                    improved = true;
                }
            }
        }
        if (!improved) {
            break;
        }
    }
    return out;
}

GridResult grid_search(const Instance& inst, std::size_t p, std::size_t resolution) {
    return grid_search(build_cost_diagonal(inst), instance_size(inst), p, resolution);
}

void write_params(std::ostream& os, const Params& params) {
    params.validate();
    auto list = [](const std::vector<double>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            s += fmt::format("{}{:.17g}", i == 0 ? "" : ", ", v[i]);
        }
        return s + "]";
    };
    os << "gamma = " << list(params.gammas) << '\n';
    os << "beta = " << list(params.betas) << '\n';
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<double> parse_list(const std::string& text, std::size_t line_no) {
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
        throw FormatError(fmt::format("parameter file line {}: expected [v1, v2, ...]", line_no));
    }
    std::vector<double> out;
    const std::string body = trim(std::string_view(text).substr(1, text.size() - 2));
    if (body.empty()) {
        return out;
    }
    std::size_t start = 0;
    while (start <= body.size()) {
        const auto comma = body.find(',', start);
        const std::string item = trim(std::string_view(body).substr(start, comma - start));
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
            throw FormatError(fmt::format("parameter file line {}: bad number '{}'", line_no, item));
        }
        out.push_back(v);
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

} // namespace

Params read_params(std::istream& is) {
    Params prm;
    bool have_gamma = false;
    bool have_beta = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string content = trim(line.substr(0, line.find('#')));
        if (content.empty()) {
            continue;
        }
        const auto eq = content.find('=');
        if (eq == std::string::npos) {
            throw FormatError(fmt::format("parameter file line {}: expected key = [...]", line_no));
        }
        const std::string key = trim(std::string_view(content).substr(0, eq));
        const auto values = parse_list(trim(std::string_view(content).substr(eq + 1)), line_no);
        if (key == "gamma") {
            prm.gammas = values;
            have_gamma = true;
        } else if (key == "beta") {
            prm.betas = values;
            have_beta = true;
        } else {
            throw FormatError(fmt::format("parameter file line {}: unknown key '{}'", line_no, key));
        }
    }
    if (!have_gamma || !have_beta) {
        throw FormatError("parameter file needs both gamma and beta");
    }
    try {
        prm.validate();
    } catch (const ParameterError& e) {
        throw FormatError(e.what());
    }
    return prm;
}

} // namespace ogplab::qaoa
