// Copyright 2026 The qdlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qd/experiment_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "qd/errors.hpp"
#include "qd/matrix_io.hpp"
#include "qd/report_io.hpp"

namespace qd {

namespace {

constexpr double kConfigNormTol = 1e-9;

struct Problem {
    std::vector<std::string> fields;
    std::string message;
};

const std::pair<ExperimentKind, const char *> kExperimentNames[] = {
    {ExperimentKind::dephase, "dephase"},
    {ExperimentKind::stern_gerlach, "stern_gerlach"},
    {ExperimentKind::qubit_chain, "qubit_chain"},
    {ExperimentKind::cat, "cat"},
    {ExperimentKind::measure, "measure"},
    {ExperimentKind::decoherence_fn, "decoherence_fn"},
    {ExperimentKind::convergence, "convergence"},
};

const std::pair<ObservableChoice::Kind, const char *> kObservableNames[] = {
    {ObservableChoice::Kind::pauli_x, "pauli_x"},
    {ObservableChoice::Kind::pauli_y, "pauli_y"},
    {ObservableChoice::Kind::pauli_z, "pauli_z"},
    {ObservableChoice::Kind::diag, "diag"},
};

const std::pair<GroupMode, const char *> kGroupModeNames[] = {
    {GroupMode::automatic, "auto"},
    {GroupMode::per_index, "per_index"},
    {GroupMode::per_block, "per_block"},
};

const std::pair<EnsembleMethod, const char *> kModeNames[] = {
    {EnsembleMethod::analytic, "analytic"},
    {EnsembleMethod::monte_carlo, "monte_carlo"},
};

const std::pair<OutputFormat, const char *> kFormatNames[] = {
    {OutputFormat::json, "json"},
    {OutputFormat::csv, "csv"},
};

const char *to_string(ObservableChoice::Kind kind) {
    for (const auto &[k, name] : kObservableNames)
        if (k == kind) return name;
    return "?";
}

const char *to_string(GroupMode mode) {
    for (const auto &[m, name] : kGroupModeNames)
        if (m == mode) return name;
    return "?";
}

std::string trim(std::string_view s) {
    auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> words;
    std::istringstream in{std::string(s)};
    for (std::string w; in >> w;) words.push_back(w);
    return words;
}

std::optional<double> to_real(std::string_view text) {
    std::string_view body = !text.empty() && text.front() == '+' ? text.substr(1) : text;
    double value = 0.0;
    auto [end, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (body.empty() || ec != std::errc() || end != body.data() + body.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::optional<std::uint64_t> to_unsigned(std::string_view text) {
    std::uint64_t value = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
    return value;
}

// Key-value entries of the [experiment] section. Every accessor marks its key
// as consumed; parse failures are recorded against the key.
class Fields {
   public:
    explicit Fields(std::vector<Problem> &problems) : problems_(problems) {}

    void add(const std::string &key, std::string value, std::size_t line) {
        if (entries_.count(key)) {
            fail(key, "line " + std::to_string(line) + ": duplicate key '" + key + "'");
            return;
        }
        entries_[key] = Entry{std::move(value), line, false};
    }

    bool has(const std::string &key) const { return entries_.count(key) != 0; }

    std::optional<std::string> raw(const std::string &key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    std::optional<std::string> required(const std::string &key) {
        auto value = raw(key);
        if (!value) fail(key, "missing required parameter '" + key + "'");
        return value;
    }

    template <class T, class Convert>
    std::optional<T> convert(const std::string &key, bool is_required, const char *what, Convert conv) {
        auto text = is_required ? required(key) : raw(key);
        if (!text) return std::nullopt;
        std::optional<T> value = conv(*text);
        if (!value) fail(key, where(key) + key + ": expected " + what + ", got '" + *text + "'");
        return value;
    }

    std::optional<double> real(const std::string &key, bool is_required = false) {
        return convert<double>(key, is_required, "a real number", to_real);
    }

    std::optional<std::uint64_t> count(const std::string &key, bool is_required = false) {
        return convert<std::uint64_t>(key, is_required, "a non-negative integer", to_unsigned);
    }

    std::optional<bool> flag(const std::string &key) {
        return convert<bool>(key, false, "true or false", [](const std::string &s) -> std::optional<bool> {
            if (s == "true") return true;
            if (s == "false") return false;
            return std::nullopt;
        });
    }

    std::optional<Complex> complex(const std::string &key, bool is_required = false) {
        return convert<Complex>(key, is_required, "a complex number re+imj", [](const std::string &s) {
            try {
                return std::optional<Complex>(parse_complex(s));
            } catch (const ValidationError &) {
                return std::optional<Complex>();
            }
        });
    }

    template <class T, class Convert>
    std::optional<std::vector<T>> list(const std::string &key, bool is_required, const char *what, Convert conv) {
        auto text = is_required ? required(key) : raw(key);
        if (!text) return std::nullopt;
        std::vector<T> out;
        for (const std::string &word : split_words(*text)) {
            std::optional<T> value = conv(word);
            if (!value) {
                fail(key, where(key) + key + ": expected a list of " + what + ", bad entry '" + word + "'");
                return std::nullopt;
            }
            out.push_back(*value);
        }
        return out;
    }

    std::optional<std::vector<double>> reals(const std::string &key, bool is_required = false) {
        return list<double>(key, is_required, "real numbers", to_real);
    }

    std::optional<std::vector<std::uint64_t>> counts(const std::string &key, bool is_required = false) {
        return list<std::uint64_t>(key, is_required, "non-negative integers", to_unsigned);
    }

    std::optional<std::vector<Complex>> complexes(const std::string &key, bool is_required = false) {
        return list<Complex>(key, is_required, "complex numbers", [](const std::string &s) {
            try {
                return std::optional<Complex>(parse_complex(s));
            } catch (const ValidationError &) {
                return std::optional<Complex>();
            }
        });
    }

    template <class E, std::size_t N>
    std::optional<E> choice(const std::string &key, const std::pair<E, const char *> (&names)[N],
                            bool is_required = false) {
        auto text = is_required ? required(key) : raw(key);
        if (!text) return std::nullopt;
        for (const auto &[value, name] : names)
            if (*text == name) return value;
        std::string options;
        for (const auto &[value, name] : names) options += std::string(options.empty() ? "" : ", ") + name;
        fail(key, where(key) + key + ": unknown value '" + *text + "' (expected one of " + options + ")");
        return std::nullopt;
    }

    void report_unused() {
        for (const auto &[key, entry] : entries_)
            if (!entry.used) fail(key, "line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
    }

    void fail(const std::string &key, std::string message) { problems_.push_back({{key}, std::move(message)}); }

   private:
    struct Entry {
        std::string value;
        std::size_t line = 0;
        bool used = false;
    };

    std::string where(const std::string &key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? std::string() : "line " + std::to_string(it->second.line) + ": ";
    }

    std::map<std::string, Entry> entries_;
    std::vector<Problem> &problems_;
};

template <class T>
void assign(T &target, const std::optional<T> &value) {
    if (value) target = *value;
}

ObservableChoice read_observable(Fields &f, const std::string &kind_key, const std::string &values_key) {
    ObservableChoice obs;
    assign(obs.kind, f.choice(kind_key, kObservableNames));
    if (obs.kind == ObservableChoice::Kind::diag) {
        assign(obs.eigenvalues, f.reals(values_key, true));
    }
    return obs;
}

ExperimentParams read_params(ExperimentKind kind, Fields &f) {
    switch (kind) {
        case ExperimentKind::dephase: {
            DephaseConfig c;
            assign(c.state, f.complexes("state", true));
            c.observable = read_observable(f, "observable", "eigenvalues");
            assign(c.group_mode, f.choice("group_mode", kGroupModeNames));
            return c;
        }
        case ExperimentKind::stern_gerlach: {
            SternGerlachConfig c;
            assign(c.alpha, f.complex("alpha", true));
            assign(c.beta, f.complex("beta", true));
            assign(c.omega, f.real("omega"));
            assign(c.pz, f.real("pz"));
            assign(c.t, f.real("t"));
            assign(c.z, f.real("z"));
            assign(c.inject_random_phase, f.flag("inject_random_phase"));
            return c;
        }
        case ExperimentKind::qubit_chain: {
            QubitChainConfig c;
            if (auto n = f.count("n_qubits", true)) c.n_qubits = static_cast<std::size_t>(*n);
            assign(c.alpha, f.complex("alpha", true));
            assign(c.beta, f.complex("beta", true));
            assign(c.random_phases, f.flag("random_phases"));
            assign(c.link_gamma, f.reals("link_gamma"));
            assign(c.link_delta, f.reals("link_delta"));
            assign(c.gamma_env, f.real("gamma_env"));
            assign(c.delta_env, f.real("delta_env"));
            if (auto order = f.counts("link_order")) c.link_order.assign(order->begin(), order->end());
            return c;
        }
        case ExperimentKind::cat: {
            CatConfig c;
            assign(c.alpha, f.complex("alpha", true));
            assign(c.beta, f.complex("beta", true));
            c.gamma = f.real("gamma");
            c.delta = f.real("delta");
            return c;
        }
        case ExperimentKind::measure: {
            MeasureConfig c;
            assign(c.state, f.complexes("state", true));
            c.observable = read_observable(f, "observable", "eigenvalues");
            assign(c.couplings, f.reals("couplings", true));
            c.pointer = read_observable(f, "pointer", "pointer_eigenvalues");
            assign(c.apparatus, f.complexes("apparatus", true));
            assign(c.t, f.real("t"));
            return c;
        }
        case ExperimentKind::decoherence_fn: {
            DecoherenceConfig c;
            if (auto n = f.count("n_qubits", true)) c.n_qubits = static_cast<std::size_t>(*n);
            assign(c.rate, f.real("rate", true));
            assign(c.dt, f.real("dt", true));
            if (auto n = f.count("steps", true)) c.steps = static_cast<std::size_t>(*n);
            return c;
        }
        case ExperimentKind::convergence: {
            ConvergenceConfig c;
            assign(c.sample_grid, f.counts("sample_grid"));
            if (auto n = f.count("repeats")) c.repeats = static_cast<std::size_t>(*n);
            if (auto n = f.count("dim")) c.dim = static_cast<std::size_t>(*n);
            return c;
        }
    }
    return DephaseConfig{};
}

double squared_norm(const std::vector<Complex> &v) {
    double s = 0.0;
    for (Complex z : v) s += std::norm(z);
    return s;
}

std::string number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void check_pair(Complex alpha, Complex beta, std::vector<Problem> &out) {
    double total = std::norm(alpha) + std::norm(beta);
    if (std::abs(total - 1.0) > kConfigNormTol) {
        out.push_back({{"alpha", "beta"},
                       "alpha, beta: |alpha|^2 + |beta|^2 = " + number(total) + ", must be 1 within 1e-9"});
    }
}

void check_state(const std::vector<Complex> &state, const std::string &key, std::vector<Problem> &out) {
    if (state.empty()) {
        out.push_back({{key}, key + ": must have at least one amplitude"});
        return;
    }
    double total = squared_norm(state);
    if (std::abs(total - 1.0) > kConfigNormTol) {
        out.push_back({{key}, key + ": squared norm is " + number(total) + ", must be 1 within 1e-9"});
    }
}

void check_observable(const ObservableChoice &obs, std::size_t dim, const std::string &kind_key,
                      const std::string &values_key, const std::string &state_key, std::vector<Problem> &out) {
    if (obs.kind == ObservableChoice::Kind::diag && obs.eigenvalues.empty()) {
        out.push_back({{values_key}, values_key + ": must list at least one eigenvalue"});
        return;
    }
    if (dim != 0 && obs.dim() != dim) {
        out.push_back({{kind_key, values_key, state_key}, kind_key + ": acts on dimension " +
                                                              std::to_string(obs.dim()) + " but " + state_key +
                                                              " has " + std::to_string(dim) + " amplitudes"});
    }
}

std::vector<Problem> collect_problems(const ExperimentConfig &cfg, const Tolerances &tol) {
    std::vector<Problem> out;
    const ExperimentKind kind = cfg.experiment();
    if (cfg.mode == EnsembleMethod::monte_carlo) {
        if (kind != ExperimentKind::dephase) {
            out.push_back({{"mode"}, "mode: monte_carlo is only available for the dephase experiment"});
        }
        if (!cfg.samples) out.push_back({{"samples", "mode"}, "samples: required when mode = monte_carlo"});
    }
    if (cfg.samples && *cfg.samples == 0) out.push_back({{"samples"}, "samples: must be at least 1"});
    if (cfg.workers == 0) out.push_back({{"workers"}, "workers: must be at least 1"});

    std::visit(
        [&](const auto &p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, DephaseConfig>) {
                check_state(p.state, "state", out);
                check_observable(p.observable, p.state.size(), "observable", "eigenvalues", "state", out);
            } else if constexpr (std::is_same_v<T, SternGerlachConfig>) {
                check_pair(p.alpha, p.beta, out);
                if (p.t < 0.0) out.push_back({{"t"}, "t: must be non-negative"});
            } else if constexpr (std::is_same_v<T, QubitChainConfig>) {
                check_pair(p.alpha, p.beta, out);
                if (p.n_qubits == 0) out.push_back({{"n_qubits"}, "n_qubits: must be at least 1"});
                const std::size_t links = p.n_qubits == 0 ? 0 : p.n_qubits - 1;
                for (const char *key : {"link_gamma", "link_delta"}) {
                    const auto &v = std::string(key) == "link_gamma" ? p.link_gamma : p.link_delta;
                    if (!v.empty() && v.size() != links) {
                        out.push_back({{key, "n_qubits"}, std::string(key) + ": expected " + std::to_string(links) +
                                                              " entries, got " + std::to_string(v.size())});
                    }
                }
                bool explicit_phases = !p.link_gamma.empty() || !p.link_delta.empty() || p.gamma_env != 0.0 ||
                                       p.delta_env != 0.0;
                if (p.random_phases && explicit_phases) {
                    out.push_back({{"random_phases"}, "random_phases: cannot be combined with explicit phases"});
                }
                if (!p.link_order.empty()) {
                    std::vector<std::size_t> sorted = p.link_order;
                    std::sort(sorted.begin(), sorted.end());
                    bool ok = sorted.size() == links;
                    for (std::size_t i = 0; ok && i < sorted.size(); ++i) ok = sorted[i] == i + 2;
                    if (!ok) out.push_back({{"link_order", "n_qubits"}, "link_order: must be a permutation of 2..n_qubits"});
                }
            } else if constexpr (std::is_same_v<T, CatConfig>) {
                check_pair(p.alpha, p.beta, out);
            } else if constexpr (std::is_same_v<T, MeasureConfig>) {
                check_state(p.state, "state", out);
                check_state(p.apparatus, "apparatus", out);
                check_observable(p.observable, p.state.size(), "observable", "eigenvalues", "state", out);
                check_observable(p.pointer, p.apparatus.size(), "pointer", "pointer_eigenvalues", "apparatus", out);
                if (p.observable.kind != ObservableChoice::Kind::diag || !p.observable.eigenvalues.empty()) {
                    std::size_t blocks = ObservableSpec(p.observable.build(), tol).blocks().size();
                    if (p.couplings.size() != blocks) {
                        out.push_back({{"couplings", "observable", "eigenvalues"},
                                       "couplings: expected one per observable block (" + std::to_string(blocks) +
                                           "), got " + std::to_string(p.couplings.size())});
                    }
                }
            } else if constexpr (std::is_same_v<T, DecoherenceConfig>) {
                if (p.n_qubits == 0) out.push_back({{"n_qubits"}, "n_qubits: must be at least 1"});
                if (p.steps == 0) out.push_back({{"steps"}, "steps: must be at least 1"});
                if (p.dt < 0.0) out.push_back({{"dt"}, "dt: must be non-negative"});
            } else if constexpr (std::is_same_v<T, ConvergenceConfig>) {
                if (p.sample_grid.size() < 2) {
                    out.push_back({{"sample_grid"}, "sample_grid: needs at least two sample counts"});
                }
                for (std::uint64_t m : p.sample_grid)
                    if (m == 0) out.push_back({{"sample_grid"}, "sample_grid: sample counts must be at least 1"});
                if (p.repeats == 0) out.push_back({{"repeats"}, "repeats: must be at least 1"});
                if (p.dim < 2) out.push_back({{"dim"}, "dim: must be at least 2"});
            }
        },
        cfg.params);
    return out;
}

std::vector<std::string> messages(const std::vector<Problem> &problems) {
    std::vector<std::string> out;
    for (const Problem &p : problems) out.push_back(p.message);
    return out;
}

// --- rendering ---------------------------------------------------------------

class Writer {
   public:
    void put(const std::string &key, const std::string &value) { out_ << key << " = " << value << '\n'; }
    void real(const std::string &key, double x) { put(key, number(x)); }
    void count(const std::string &key, std::uint64_t n) { put(key, std::to_string(n)); }
    void flag(const std::string &key, bool b) { put(key, b ? "true" : "false"); }
    void complex(const std::string &key, Complex z) { put(key, format_complex(z)); }

    template <class T, class F>
    void list(const std::string &key, const std::vector<T> &v, F fmt) {
        if (v.empty()) return;
        std::string s;
        for (const T &x : v) s += (s.empty() ? "" : " ") + fmt(x);
        put(key, s);
    }
    void reals(const std::string &key, const std::vector<double> &v) { list(key, v, number); }
    void complexes(const std::string &key, const std::vector<Complex> &v) { list(key, v, format_complex); }

    void observable(const std::string &kind_key, const std::string &values_key, const ObservableChoice &obs) {
        put(kind_key, to_string(obs.kind));
        if (obs.kind == ObservableChoice::Kind::diag) reals(values_key, obs.eigenvalues);
    }

    std::string str() const { return out_.str(); }

   private:
    std::ostringstream out_;
};

}  // namespace

const char *to_string(ExperimentKind kind) {
    for (const auto &[k, name] : kExperimentNames)
        if (k == kind) return name;
    return "?";
}

const char *to_string(OutputFormat format) { return format == OutputFormat::json ? "json" : "csv"; }

std::size_t ObservableChoice::dim() const { return kind == Kind::diag ? eigenvalues.size() : 2; }

Operator ObservableChoice::build() const {
    switch (kind) {
        case Kind::pauli_x:
            return pauli::x();
        case Kind::pauli_y:
            return pauli::y();
        case Kind::pauli_z:
            return pauli::z();
        case Kind::diag:
            break;
    }
    RVector d = Eigen::Map<const RVector>(eigenvalues.data(), static_cast<Eigen::Index>(eigenvalues.size()));
    return Operator::diagonal({eigenvalues.size()}, d);
}

ExperimentKind ExperimentConfig::experiment() const { return static_cast<ExperimentKind>(params.index()); }

void ExperimentConfig::validate(const Tolerances &tol) const {
    std::vector<Problem> problems = collect_problems(*this, tol);
    if (!problems.empty()) throw ValidationError(messages(problems));
}

ExperimentConfig parse_config(std::string_view text, const Tolerances &tol) {
    std::vector<Problem> problems;
    Fields fields(problems);
    bool in_section = false, seen_section = false;

    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        std::string body = trim(line.substr(0, line.find('#')));
        if (body.empty()) continue;
        const std::string at = "line " + std::to_string(line_no) + ": ";
        if (body.front() == '[') {
            if (body == "[experiment]" && !seen_section) {
                in_section = seen_section = true;
            } else {
                in_section = false;
                problems.push_back({{}, at + (body == "[experiment]" ? "repeated section " : "unknown section ") + body});
            }
            continue;
        }
        auto eq = body.find('=');
        if (eq == std::string::npos) {
            problems.push_back({{}, at + "expected 'key = value', got '" + body + "'"});
            continue;
        }
        std::string key = trim(body.substr(0, eq)), value = trim(body.substr(eq + 1));
        if (key.empty()) {
            problems.push_back({{}, at + "missing key before '='"});
            continue;
        }
        if (!in_section) {
            if (!seen_section) problems.push_back({{}, at + "'" + key + "' appears before the [experiment] header"});
            continue;
        }
        fields.add(key, value, line_no);
    }
    if (!seen_section) problems.push_back({{}, "missing [experiment] section"});

    ExperimentConfig cfg;
    auto kind = fields.choice("name", kExperimentNames, seen_section);
    if (auto seed = fields.count("seed")) cfg.seed = *seed;
    cfg.samples = fields.count("samples");
    assign(cfg.mode, fields.choice("mode", kModeNames));
    assign(cfg.output, fields.raw("output"));
    assign(cfg.format, fields.choice("format", kFormatNames));
    if (auto workers = fields.count("workers")) {
        if (*workers > 1024) {
            fields.fail("workers", "workers: at most 1024");
        } else {
            cfg.workers = static_cast<unsigned>(*workers);
        }
    }
    if (kind) cfg.params = read_params(*kind, fields);
    fields.report_unused();

    if (kind) {
        std::set<std::string> failed;
        for (const Problem &p : problems) failed.insert(p.fields.begin(), p.fields.end());
        for (Problem &p : collect_problems(cfg, tol)) {
            bool shadowed = std::any_of(p.fields.begin(), p.fields.end(),
                                        [&](const std::string &f) { return failed.count(f) != 0; });
            if (!shadowed) problems.push_back(std::move(p));
        }
    }
    if (!problems.empty()) throw ValidationError(messages(problems));
    return cfg;
}

std::string render(const ExperimentConfig &cfg) {
    Writer w;
    w.put("name", to_string(cfg.experiment()));
    w.count("seed", cfg.seed);
    if (cfg.samples) w.count("samples", *cfg.samples);
    w.put("mode", to_string(cfg.mode));
    if (!cfg.output.empty()) w.put("output", cfg.output);
    w.put("format", to_string(cfg.format));
    w.count("workers", cfg.workers);
    std::visit(
        [&](const auto &p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, DephaseConfig>) {
                w.complexes("state", p.state);
                w.observable("observable", "eigenvalues", p.observable);
                w.put("group_mode", to_string(p.group_mode));
            } else if constexpr (std::is_same_v<T, SternGerlachConfig>) {
                w.complex("alpha", p.alpha);
                w.complex("beta", p.beta);
                w.real("omega", p.omega);
                w.real("pz", p.pz);
                w.real("t", p.t);
                w.real("z", p.z);
                w.flag("inject_random_phase", p.inject_random_phase);
            } else if constexpr (std::is_same_v<T, QubitChainConfig>) {
                w.count("n_qubits", p.n_qubits);
                w.complex("alpha", p.alpha);
                w.complex("beta", p.beta);
                w.flag("random_phases", p.random_phases);
                w.reals("link_gamma", p.link_gamma);
                w.reals("link_delta", p.link_delta);
                w.real("gamma_env", p.gamma_env);
                w.real("delta_env", p.delta_env);
                w.list("link_order", p.link_order, [](std::size_t n) { return std::to_string(n); });
            } else if constexpr (std::is_same_v<T, CatConfig>) {
                w.complex("alpha", p.alpha);
                w.complex("beta", p.beta);
                if (p.gamma) w.real("gamma", *p.gamma);
                if (p.delta) w.real("delta", *p.delta);
            } else if constexpr (std::is_same_v<T, MeasureConfig>) {
                w.complexes("state", p.state);
                w.observable("observable", "eigenvalues", p.observable);
                w.reals("couplings", p.couplings);
                w.observable("pointer", "pointer_eigenvalues", p.pointer);
                w.complexes("apparatus", p.apparatus);
                w.real("t", p.t);
            } else if constexpr (std::is_same_v<T, DecoherenceConfig>) {
                w.count("n_qubits", p.n_qubits);
                w.real("rate", p.rate);
                w.real("dt", p.dt);
                w.count("steps", p.steps);
            } else if constexpr (std::is_same_v<T, ConvergenceConfig>) {
                w.list("sample_grid", p.sample_grid, [](std::uint64_t n) { return std::to_string(n); });
                w.count("repeats", p.repeats);
                w.count("dim", p.dim);
            }
        },
        cfg.params);
    return "[experiment]\n" + w.str();
}

}  // namespace qd
