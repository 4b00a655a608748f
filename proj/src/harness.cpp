#include "superbethe/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "superbethe/izergin.hpp"
#include "superbethe/onshell.hpp"

namespace superbethe {

using nlohmann::json;

const std::vector<std::string>& known_suites() {
    static const std::vector<std::string> names{"defs",    "izergin", "appendix",      "chain",
                                                "bethe-equal", "actions", "onshell-exact", "onshell-numeric"};
    return names;
}

// ---------------------------------------------------------------- config

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

/// Integer, "p/q", decimal "0.25" or the canonical complex form.
Scalar parse_scalar(const std::string& key, const std::string& raw) {
    const std::string text = trim(raw);
    if (text.empty())
        throw ConfigError(key, "empty value");
    try {
        if (text.find('.') != std::string::npos && text.find('i') == std::string::npos) {
            const bool neg = text[0] == '-';
            const std::string body = (neg || text[0] == '+') ? text.substr(1) : text;
            const auto dot = body.find('.');
            const std::string digits = body.substr(0, dot) + body.substr(dot + 1);
            if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
                throw ConfigError(key, "not a number: " + text);
            mpz_class den = 1;
            for (std::size_t k = dot + 1; k < body.size(); ++k)
                den *= 10;
            mpq_class q(mpz_class(digits), den);
            q.canonicalize();
            return Scalar(GaussRational(neg ? mpq_class(-q) : q));
        }
        return Scalar::parse(text);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError(key, "not a number: " + text);
    }
}

std::uint64_t parse_uint(const std::string& key, const std::string& raw) {
    const std::string text = trim(raw);
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError(key, "expected a non-negative integer, got '" + raw + "'");
    try {
        return std::stoull(text);
    } catch (const std::exception&) {
        throw ConfigError(key, "integer out of range: " + text);
    }
}

std::array<Scalar, 3> parse_twist(const std::vector<std::string>& parts) {
    if (parts.size() != 3)
        throw ConfigError("twist", "expected three values k1,k2,k3");
    return {parse_scalar("twist", parts[0]), parse_scalar("twist", parts[1]), parse_scalar("twist", parts[2])};
}

Mode parse_mode(const std::string& text) {
    if (text == "exact")
        return Mode::exact;
    if (text == "numeric")
        return Mode::numeric;
    throw ConfigError("mode", "expected exact or numeric, got '" + text + "'");
}

std::vector<std::string> parse_suites(const std::vector<std::string>& names) {
    std::vector<std::string> out;
    for (const auto& n : names) {
        if (n == "all")
            return known_suites();
        if (n == "none")
            continue;
        out.push_back(n);
    }
    return out;
}

std::string json_text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

std::vector<std::string> json_list(const json& v) {
    if (v.is_string())
        return split_list(v.get<std::string>());
    std::vector<std::string> out;
    if (v.is_array())
        for (const auto& e : v)
            out.push_back(json_text(e));
    return out;
}

std::uint64_t json_uint(const std::string& key, const json& v) { return parse_uint(key, json_text(v)); }

} // namespace

void validate(const SuiteConfig& cfg) {
    for (const auto& s : cfg.suites)
        if (std::find(known_suites().begin(), known_suites().end(), s) == known_suites().end())
            throw ConfigError("suites", "unknown suite '" + s + "'");
    if (cfg.L < 1 || cfg.L > 8)
        throw ConfigError("L", "chain length must be in 1..8");
    if (cfg.c.is_zero())
        throw ConfigError("c", "c must be nonzero");
    for (const auto& k : cfg.twist)
        if (k.is_zero())
            throw ConfigError("twist", "twist entries must be nonzero");
    if (cfg.max_a + cfg.max_n > cfg.L)
        throw ConfigError("max_a", "max_a + max_n must not exceed L");
    if (cfg.max_b + cfg.max_n > cfg.L)
        throw ConfigError("max_b", "max_b + max_n must not exceed L");
    if (cfg.format != "json" && cfg.format != "text")
        throw ConfigError("format", "expected json or text, got '" + cfg.format + "'");
}

json config_to_json(const SuiteConfig& cfg) {
    return json{{"suites", cfg.suites},
                {"L", cfg.L},
                {"c", cfg.c.str()},
                {"twist", {cfg.twist[0].str(), cfg.twist[1].str(), cfg.twist[2].str()}},
                {"max_a", cfg.max_a},
                {"max_b", cfg.max_b},
                {"max_n", cfg.max_n},
                {"draws", cfg.draws},
                {"seed", cfg.seed},
                {"mode", cfg.mode == Mode::exact ? "exact" : "numeric"},
                {"format", cfg.format},
                {"out", cfg.out},
                {"only", cfg.only},
                {"inject_failure", cfg.inject_failure}};
}

SuiteConfig config_from_json(const json& j, SuiteConfig cfg) {
    if (!j.is_object())
        throw ConfigError("config", "expected a JSON object");
    for (const auto& [key, v] : j.items()) {
        if (key == "suites")
            cfg.suites = parse_suites(json_list(v));
        else if (key == "L")
            cfg.L = json_uint(key, v);
        else if (key == "c")
            cfg.c = parse_scalar(key, json_text(v));
        else if (key == "twist")
            cfg.twist = parse_twist(json_list(v));
        else if (key == "max_a" || key == "max-a")
            cfg.max_a = json_uint(key, v);
        else if (key == "max_b" || key == "max-b")
            cfg.max_b = json_uint(key, v);
        else if (key == "max_n" || key == "max-n")
            cfg.max_n = json_uint(key, v);
        else if (key == "draws")
            cfg.draws = json_uint(key, v);
        else if (key == "seed")
            cfg.seed = json_uint(key, v);
        else if (key == "mode")
            cfg.mode = parse_mode(json_text(v));
        else if (key == "format")
            cfg.format = json_text(v);
        else if (key == "out")
            cfg.out = json_text(v);
        else if (key == "only")
            cfg.only = json_list(v);
        else if (key == "inject_failure" || key == "inject-failure") {
            if (!v.is_boolean())
                throw ConfigError(key, "expected true or false");
            cfg.inject_failure = v.get<bool>();
        } else
            throw ConfigError(key, "unknown configuration key");
    }
    return cfg;
}

bool parse_config(const std::vector<std::string>& args, SuiteConfig& cfg, std::string& help) {
    CLI::App app{"Exact verification of gl(2|1) multiple-action formulas against a spin-chain oracle",
                 "superbethe-check"};
    std::string config_file, suites, L, c, twist, max_a, max_b, max_n, draws, seed, mode, format, out, only;
    bool inject = false;
    app.add_option("--config", config_file, "JSON file with configuration keys; flags override it");
    app.add_option("--suites", suites, "Comma-separated suites, 'all' or 'none'");
    app.add_option("--L", L, "Chain length, 1..8 (default 5)");
    app.add_option("--c", c, "Deformation constant, nonzero (default 1)");
    app.add_option("--twist", twist, "Twist k1,k2,k3 (default 1,1,2)");
    app.add_option("--max-a", max_a, "Largest #u (default 2)");
    app.add_option("--max-b", max_b, "Largest #v (default 2)");
    app.add_option("--max-n", max_n, "Largest action multiplicity (default 2)");
    app.add_option("--draws", draws, "Random instances per check (default 5)");
    app.add_option("--seed", seed, "Base seed; SUPERBETHE_SEED overrides it (default 1)");
    app.add_option("--mode", mode, "exact or numeric (default exact)");
    app.add_option("--format", format, "json or text (default json)");
    app.add_option("--out", out, "Output path; standard output when omitted");
    app.add_option("--only", only, "Comma-separated check-id prefixes to run");
    app.add_flag("--inject-failure", inject, "Add one check that always fails");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        help = app.help();
        return false;
    } catch (const CLI::ParseError& e) {
        throw ConfigError("args", e.what());
    }

    if (!config_file.empty()) {
        std::ifstream in(config_file);
        if (!in)
            throw ConfigError("config", "cannot read " + config_file);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw ConfigError("config", e.what());
        }
        cfg = config_from_json(j, cfg);
    }
    auto given = [&](const char* name) { return app.count(name) > 0; };
    if (given("--suites"))
        cfg.suites = parse_suites(split_list(suites));
    if (given("--L"))
        cfg.L = parse_uint("L", L);
    if (given("--c"))
        cfg.c = parse_scalar("c", c);
    if (given("--twist"))
        cfg.twist = parse_twist(split_list(twist));
    if (given("--max-a"))
        cfg.max_a = parse_uint("max_a", max_a);
    if (given("--max-b"))
        cfg.max_b = parse_uint("max_b", max_b);
    if (given("--max-n"))
        cfg.max_n = parse_uint("max_n", max_n);
    if (given("--draws"))
        cfg.draws = parse_uint("draws", draws);
    if (given("--seed"))
        cfg.seed = parse_uint("seed", seed);
    if (given("--mode"))
        cfg.mode = parse_mode(mode);
    if (given("--format"))
        cfg.format = format;
    if (given("--out"))
        cfg.out = out;
    if (given("--only"))
        cfg.only = split_list(only);
    if (inject)
        cfg.inject_failure = true;
    if (const char* env = std::getenv("SUPERBETHE_SEED"); env && *env)
        cfg.seed = parse_uint("SUPERBETHE_SEED", env);
    validate(cfg);
    return true;
}

// ---------------------------------------------------------------- checks

namespace {

struct Outcome {
    Outcome(Scalar r, double s = 1.0, std::optional<double> tol = std::nullopt, json extra = json::object())
        : residual(std::move(r)), scale(s), tolerance(tol), info(std::move(extra)) {}

    Scalar residual;
    /// Magnitude the numeric tolerance is relative to.
    double scale;
    /// Absolute tolerance overriding the mode's default rule.
    std::optional<double> tolerance;
    json info;
};

struct Job {
    std::string suite;
    std::string id;
    std::size_t draw = 0;
    json params;
    std::function<Outcome()> run;
};

std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Stable seed for a (tag, draw) pair.
std::uint64_t derive(std::uint64_t base, const std::string& tag, std::size_t draw) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : tag)
        h = (h ^ ch) * 0x100000001b3ull;
    return mix(mix(base) ^ h ^ mix(draw + 1));
}

std::string ab(std::size_t a, std::size_t b) { return "a" + std::to_string(a) + "b" + std::to_string(b); }

Scalar max_of(const Scalar& x, const Scalar& y) {
    if (x.is_exact() && y.is_exact()) {
        const mpq_class& xr = x.exact().real();
        const mpq_class& yr = y.exact().real();
        return xr >= yr ? x : y;
    }
    return x.abs() >= y.abs() ? x : y;
}

Scalar bool_residual(bool ok) { return Scalar(ok ? 0 : 1); }

class Builder {
public:
    Builder(const SuiteConfig& cfg) : cfg_(cfg), ctx_(cfg.c, cfg.mode) {
        for (const auto& k : cfg.twist)
            twist_.push_back(ctx_.lift(k));
    }

    std::vector<Job> jobs;

    void build() {
        for (const auto& s : cfg_.suites) {
            if (s == "defs")
                defs();
            else if (s == "izergin")
                izergin_suite();
            else if (s == "appendix")
                appendix();
            else if (s == "chain")
                chain();
            else if (s == "bethe-equal")
                bethe_equal();
            else if (s == "actions")
                actions();
            else if (s == "onshell-exact")
                onshell_exact();
            else if (s == "onshell-numeric")
                onshell_numeric();
        }
        if (cfg_.inject_failure)
            push("harness", "harness.injected", 0, json::object(),
                 [] { return Outcome{Scalar(1), 1.0, std::nullopt, {{"note", "injected failure"}}}; });
    }

private:
    const SuiteConfig& cfg_;
    EvalContext ctx_;
    std::vector<Scalar> twist_;

    std::array<Scalar, 3> twist() const { return {twist_[0], twist_[1], twist_[2]}; }

    bool selected(const std::string& id) const {
        if (cfg_.only.empty())
            return true;
        return std::any_of(cfg_.only.begin(), cfg_.only.end(),
                           [&](const std::string& p) { return id.compare(0, p.size(), p) == 0; });
    }

    void push(const std::string& suite, const std::string& id, std::size_t draw, json params,
              std::function<Outcome()> run) {
        if (!selected(id))
            return;
        params["draw"] = draw;
        jobs.push_back(Job{suite, id, draw, std::move(params), std::move(run)});
    }

    VarSet sample(std::size_t count, const std::string& tag, std::size_t draw, const VarSet& forbidden = {}) const {
        return sample_generic(count, ctx_, derive(cfg_.seed, tag, draw), forbidden).with_mode(ctx_.mode());
    }

    static VarSet slice(const VarSet& all, std::size_t from, std::size_t count) {
        return all.subset(((std::uint64_t{1} << count) - 1) << from);
    }

    // -------------------------------------------------------------- defs
    void defs() {
        for (std::size_t d = 0; d < cfg_.draws; ++d) {
            const VarSet p = sample(3, "defs", d);
            const EvalContext ctx = ctx_;
            const Scalar x = p[0], y = p[1], c = ctx.c();
            push("defs", "defs.g_antisymmetry", d, json::object(), [=, this] {
                return Outcome{aux_eval(AuxKind::g, x, y, ctx) + aux_eval(AuxKind::g, y, x, ctx)};
            });
            push("defs", "defs.f_shift", d, json::object(), [=, this] {
                return Outcome{aux_eval(AuxKind::f, x - c, y, ctx) * aux_eval(AuxKind::f, y, x, ctx) - Scalar(1)};
            });
            push("defs", "defs.h_inverse", d, json::object(), [=, this] {
                return Outcome{aux_eval(AuxKind::h, x, y, ctx) * aux_eval(AuxKind::g, x, y - c, ctx) - Scalar(1)};
            });
            push("defs", "defs.prod_split", d, json::object(), [=, this] {
                const VarSet a = sample(2, "defs.prod.a", d), b = sample(2, "defs.prod.b", d, a),
                             cc = sample(3, "defs.prod.c", d, a.joined(b));
                Scalar worst(0);
                for (AuxKind k : {AuxKind::g, AuxKind::f, AuxKind::h, AuxKind::t})
                    worst = max_of(worst, (prod_eval(k, a.joined(b), cc, ctx) -
                                           prod_eval(k, a, cc, ctx) * prod_eval(k, b, cc, ctx))
                                              .magnitude());
                return Outcome{worst};
            });
            push("defs", "defs.partitions", d, json::object(), [=, this] {
                const std::size_t total = 2 + d % 4;
                const VarSet src = sample(total, "defs.partitions", d);
                const std::vector<std::size_t> sizes{total / 2, 1, total - total / 2 - 1};
                std::set<std::vector<std::size_t>> seen;
                std::uint64_t count = 0;
                for_each_partition(src, sizes, [&](std::span<const VarSet> blocks) {
                    std::vector<std::size_t> key;
                    for (const auto& b : blocks) {
                        key.insert(key.end(), b.ids().begin(), b.ids().end());
                        key.push_back(SIZE_MAX);
                    }
                    seen.insert(key);
                    ++count;
                });
                const bool ok = count == multinomial(total, sizes) && seen.size() == count;
                return Outcome{bool_residual(ok), 1.0, std::nullopt, {{"count", count}}};
            });
        }
    }

    // -------------------------------------------------------------- izergin
    void izergin_suite() {
        for (std::size_t d = 0; d < cfg_.draws; ++d) {
            for (std::size_t n = 1; n <= 4; ++n) {
                const std::string id = "izergin.shift.n" + std::to_string(n);
                push("izergin", id, d, {{"n", n}}, [this, d, n, id] {
                    const VarSet p = sample(2 * n, id, d);
                    return Outcome{check_shift_identity(slice(p, 0, n), slice(p, n, n), ctx_).magnitude()};
                });
            }
            push("izergin", "izergin.permutation.n3", d, {{"n", 3}}, [this, d] {
                const VarSet p = sample(6, "izergin.permutation", d);
                const VarSet x = slice(p, 0, 3), y = slice(p, 3, 3);
                const VarSet xr{x[2], x[0], x[1]}, yr{y[1], y[2], y[0]};
                const Scalar k = izergin(x, y, ctx_);
                return Outcome{max_of((k - izergin(xr, y, ctx_)).magnitude(), (k - izergin(x, yr, ctx_)).magnitude()),
                               k.abs()};
            });
            push("izergin", "izergin.numeric_agreement.n3", d, {{"n", 3}}, [this, d] {
                const EvalContext exact(cfg_.c);
                const EvalContext numeric(ctx_.c().to_mode(Mode::numeric), Mode::numeric);
                const VarSet p = sample_generic(6, exact, derive(cfg_.seed, "izergin.numeric", d));
                const Scalar ke = izergin(slice(p, 0, 3), slice(p, 3, 3), exact);
                const Scalar kn = izergin(slice(p, 0, 3).with_mode(Mode::numeric),
                                          slice(p, 3, 3).with_mode(Mode::numeric), numeric);
                const double rel = std::abs(ke.to_complex() - kn.to_complex()) / std::max(1e-300, ke.abs());
                return Outcome{Scalar::numeric(rel), 1.0, 1e-12};
            });
        }
    }

    // -------------------------------------------------------------- appendix
    void appendix() {
        for (std::size_t d = 0; d < cfg_.draws; ++d) {
            for (std::size_t m1 = 0; m1 <= 5; ++m1)
                for (std::size_t m2 = 0; m1 + m2 <= 5; ++m2) {
                    const json params{{"m1", m1}, {"m2", m2}};
                    const std::string tag = "m" + std::to_string(m1) + "_" + std::to_string(m2);
                    for (const char* lemma : {"a1", "a2"}) {
                        const std::string id = std::string("appendix.") + lemma + "." + tag;
                        const bool first = std::string(lemma) == "a1";
                        push("appendix", id, d, params, [this, d, m1, m2, id, first] {
                            const std::size_t m = m1 + m2;
                            const VarSet p = sample(2 * m, id, d);
                            const VarSet w = slice(p, 0, m), u = slice(p, m, m1), v = slice(p, m + m1, m2);
                            const IdentitySides s = first ? lemma_a1(w, u, v, ctx_) : lemma_a2(w, u, v, ctx_);
                            return Outcome{s.residual().magnitude(), s.lhs.abs()};
                        });
                    }
                }
            for (std::size_t n = 1; n <= 4; ++n) {
                const std::string ci = "appendix.ci.n" + std::to_string(n);
                push("appendix", ci, d, {{"n", n}}, [this, d, n, ci] {
                    const VarSet p = sample(2 * n, ci, d);
                    const VarSet z = slice(p, n, n);
                    return Outcome{check_ci_identity(slice(p, 0, n), z[n - 1], z.without(n - 1), ctx_).magnitude()};
                });
                const std::string ml = "appendix.ml.n" + std::to_string(n);
                push("appendix", ml, d, {{"n", n}}, [this, d, n, ml] {
                    const VarSet p = sample(2 * n, ml, d);
                    return Outcome{check_ml_identity(slice(p, 0, n), slice(p, n, n), ctx_).magnitude()};
                });
            }
        }
    }

    // -------------------------------------------------------------- chain
    void chain() {
        for (std::size_t d = 0; d < cfg_.draws; ++d) {
            push("chain", "chain.ybe", d, json::object(), [this, d] {
                const VarSet p = sample(3, "chain.ybe", d);
                return Outcome{ybe_residual(p[0], p[1], p[2], ctx_)};
            });
            for (std::size_t L = 1; L <= std::min<std::size_t>(3, cfg_.L); ++L)
                for (bool twisted : {false, true}) {
                    const std::string id =
                        "chain.rtt.L" + std::to_string(L) + (twisted ? ".twisted" : ".untwisted");
                    push("chain", id, d, {{"L", L}}, [this, d, L, twisted, id] {
                        const VarSet theta = sample(L, id + ".theta", d);
                        const VarSet uv = sample(2, id + ".uv", d, theta);
                        const ChainRep ch = twisted ? ChainRep(theta, twist(), ctx_) : ChainRep(theta, ctx_);
                        return Outcome{rtt_residual(ch, uv[0], uv[1])};
                    });
                }
            const std::string vac = "chain.vacuum.L" + std::to_string(cfg_.L);
            push("chain", vac, d, {{"L", cfg_.L}}, [this, d, vac] {
                const VarSet theta = sample(cfg_.L, vac + ".theta", d);
                const VarSet u = sample(1, vac + ".u", d, theta);
                const ChainRep ch(theta, twist(), ctx_);
                const Scalar lam2 = lambda_eval(ch, 2, u[0]);
                if (lam2.is_zero())
                    throw ZeroWeight("lambda_2 vanishes at a sampled point");
                lambda_eval(ch, 1, u[0]);
                lambda_eval(ch, 3, u[0]);
                return Outcome{vacuum_residual(ch, u[0])};
            });
            for (std::size_t L = 1; L <= std::min<std::size_t>(4, cfg_.L); ++L) {
                const std::string id = "chain.transfer.L" + std::to_string(L);
                push("chain", id, d, {{"L", L}}, [this, d, L, id] {
                    const VarSet theta = sample(L, id + ".theta", d);
                    const VarSet uv = sample(2, id + ".uv", d, theta);
                    const ChainRep ch(theta, twist(), ctx_);
                    const DenseMatrix tu = transfer_matrix(ch, uv[0]), tv = transfer_matrix(ch, uv[1]);
                    return Outcome{(tu * tv - tv * tu).max_abs(), (tu * tv).max_abs().abs()};
                });
            }
        }
    }

    // -------------------------------------------------------------- bethe
    void bethe_equal() {
        const std::size_t total = cfg_.max_a + cfg_.max_b;
        for (std::size_t d = 0; d < cfg_.draws; ++d) {
            auto setup = std::make_shared<std::optional<std::pair<ChainRep, WeightProvider>>>();
            auto get = [this, d, setup]() -> const std::pair<ChainRep, WeightProvider>& {
                if (!*setup) {
                    ChainRep ch(sample(cfg_.L, "bethe.theta", d), twist(), ctx_);
                    WeightProvider w = chain_weights(ch);
                    setup->emplace(std::move(ch), std::move(w));
                }
                return **setup;
            };
            for (std::size_t a = 0; a <= std::min(total, cfg_.L); ++a)
                for (std::size_t b = 0; a + b <= total && b <= cfg_.L; ++b) {
                    const std::string id = "bethe.equal." + ab(a, b);
                    push("bethe-equal", id, d, {{"a", a}, {"b", b}, {"L", cfg_.L}}, [this, d, a, b, id, get] {
                        const auto& [ch, w] = get();
                        const VarSet p = sample(a + b, id, d, ch.theta());
                        const BetheLabel label{slice(p, 0, a), slice(p, a, b)};
                        const StateVector sa = bethe_sum_A(ch, w, label);
                        const StateVector sb = bethe_sum_B(ch, w, label);
                        const StateVector sr = bethe_recursive(ch, w, label);
                        const Scalar norm = max_abs(sa);
                        Outcome o{max_of(max_abs(difference(sa, sb)), max_abs(difference(sa, sr))), norm.abs()};
                        o.info["nonzero"] = !norm.is_zero();
                        return o;
                    });
                }
        }
    }

    // -------------------------------------------------------------- actions
    void actions() {
        struct DrawState {
            std::optional<ChainRep> chain;
            std::optional<BetheFactory> factory;
        };
        for (std::size_t d = 0; d < cfg_.draws; ++d) {
            auto state = std::make_shared<DrawState>();
            auto get = [this, d, state]() -> DrawState& {
                if (!state->chain) {
                    state->chain.emplace(sample(cfg_.L, "actions.theta", d), twist(), ctx_);
                    state->factory.emplace(*state->chain, chain_weights(*state->chain));
                }
                return *state;
            };
            for (std::size_t n = 1; n <= cfg_.max_n; ++n)
                for (std::size_t a = 0; a <= cfg_.max_a; ++a)
                    for (std::size_t b = 0; b <= cfg_.max_b; ++b) {
                        if (a + n > cfg_.L || b + n > cfg_.L)
                            continue;
                        const std::string cell = "actions.cell.n" + std::to_string(n) + "." + ab(a, b);
                        for (const auto& [i, j] : all_entries()) {
                            const OperatorId op{i, j, n};
                            const std::string id = "action." + op.name() + ".n" + std::to_string(n);
                            push("actions", id, d, {{"a", a}, {"b", b}, {"L", cfg_.L}},
                                 [this, d, a, b, n, op, cell, get] {
                                     DrawState& st = get();
                                     const VarSet p = sample(n + a + b, cell, d, st.chain->theta());
                                     const ActionInput in{op, slice(p, 0, n),
                                                          BetheLabel{slice(p, n, a), slice(p, n + a, b)},
                                                          st.factory->weights(), ctx_};
                                     const StateVector lhs = action_lhs(*st.chain, in, *st.factory);
                                     const LinearCombo combo = act(in);
                                     const Scalar norm = max_abs(lhs);
                                     Outcome o{max_abs(difference(lhs, st.factory->expand(combo))), norm.abs()};
                                     o.info["lhs_nonzero"] = !norm.is_zero();
                                     o.info["terms"] = combo.size();
                                     return o;
                                 });
                        }
                    }
        }
    }

    // -------------------------------------------------------------- onshell
    void onshell_exact() {
        for (std::size_t d = 0; d < cfg_.draws; ++d) {
            for (std::size_t point = 0; point < 2; ++point)
                push("onshell-exact", "onshell.g_identity", d, {{"point", point}}, [this, d, point] {
                    const VarSet p = sample(3, "onshell.g_identity." + std::to_string(point), d);
                    return Outcome{three_term_identity(p[0], p[1], p[2], ctx_).magnitude()};
                });
            for (std::size_t a = 0; a <= 3; ++a)
                for (std::size_t b = 0; b <= 3; ++b) {
                    const std::string cell = "onshell.cell." + ab(a, b);
                    auto system = [this, d, a, b, cell] {
                        const VarSet p = sample(a + b + 1, cell, d);
                        const VarSet u = slice(p, 0, a), v = slice(p, a, b);
                        return std::make_pair(BetheSystem{u, v, substituted_weights(synthetic_weights(), u, v, ctx_), ctx_},
                                              p[a + b]);
                    };
                    push("onshell-exact", "onshell.substitution." + ab(a, b), d, {{"a", a}, {"b", b}}, [system] {
                        const auto [sys, z] = system();
                        Scalar worst(0);
                        for (const auto& r : bethe_residuals(sys))
                            worst = max_of(worst, r.magnitude());
                        const SpectralDecomposition dec = decompose_transfer_action(z, sys);
                        for (const auto* terms : {&dec.lambda_terms, &dec.lambda_tilde_terms, &dec.m_terms})
                            for (const auto& t : *terms)
                                worst = max_of(worst, t.coeff.magnitude());
                        return Outcome{worst, std::max(1.0, dec.tau.abs())};
                    });
                    push("onshell-exact", "onshell.residues." + ab(a, b), d, {{"a", a}, {"b", b}}, [system, a, b] {
                        const auto [sys, z] = system();
                        Scalar worst(0);
                        for (std::size_t j = 0; j < a; ++j)
                            worst = max_of(worst, tau_residue_u(j, sys).magnitude());
                        for (std::size_t k = 0; k < b; ++k)
                            worst = max_of(worst, tau_residue_v(k, sys).magnitude());
                        return Outcome{worst};
                    });
                }
            auto chain = std::make_shared<std::optional<ChainRep>>();
            for (std::size_t a = 0; a <= cfg_.max_a; ++a)
                for (std::size_t b = 0; b <= cfg_.max_b; ++b) {
                    const std::string id = "onshell.decomposition." + ab(a, b);
                    push("onshell-exact", id, d, {{"a", a}, {"b", b}, {"L", cfg_.L}}, [this, d, a, b, id, chain] {
                        if (!*chain)
                            chain->emplace(sample(cfg_.L, "onshell.decomposition.theta", d), twist(), ctx_);
                        const ChainRep& ch = **chain;
                        const WeightProvider w = chain_weights(ch);
                        const VarSet p = sample(a + b + 1, id, d, ch.theta());
                        const BetheSystem sys{slice(p, 0, a), slice(p, a, b), w, ctx_};
                        BetheFactory factory(ch, w);
                        const StateVector lhs = apply_transfer(ch, p[a + b], factory.vector(BetheLabel{sys.u, sys.v}));
                        const LinearCombo combo = decompose_transfer_action(p[a + b], sys).combo();
                        return Outcome{max_abs(difference(lhs, factory.expand(combo))), max_abs(lhs).abs()};
                    });
                }
        }
    }

    void onshell_numeric() {
        const EvalContext nctx(cfg_.c.to_mode(Mode::numeric), Mode::numeric);
        const std::array<Scalar, 3> ntwist{cfg_.twist[0].to_mode(Mode::numeric), cfg_.twist[1].to_mode(Mode::numeric),
                                           cfg_.twist[2].to_mode(Mode::numeric)};
        const std::size_t a = 1, b = 1;
        const json params{{"a", a}, {"b", b}, {"L", cfg_.L}};
        for (std::size_t d = 0; d < cfg_.draws; ++d) {
            struct State {
                std::optional<ChainRep> chain;
                NewtonResult res;
                VarSet probes;
            };
            auto state = std::make_shared<std::optional<State>>();
            auto get = [this, d, nctx, ntwist, state]() -> State& {
                if (!*state) {
                    const EvalContext ectx(cfg_.c);
                    const VarSet theta = sample_generic(cfg_.L, ectx, derive(cfg_.seed, "onshell.numeric.theta", d));
                    State s;
                    s.chain.emplace(theta.with_mode(Mode::numeric), ntwist, nctx);
                    NewtonOptions opt;
                    opt.seed = derive(cfg_.seed, "onshell.numeric.newton", d);
                    s.res = solve_bethe_newton(*s.chain, a, b, opt);
                    s.probes = sample_generic(5, ectx, derive(cfg_.seed, "onshell.numeric.probes", d), theta)
                                   .with_mode(Mode::numeric);
                    state->emplace(std::move(s));
                }
                State& s = **state;
                if (s.res.roots.empty())
                    throw NoConvergence("Newton found no root from any seed");
                return s;
            };
            push("onshell-numeric", "onshell.newton", d, params, [get] {
                const State& s = get();
                Outcome o{Scalar::numeric(*std::min_element(s.res.residuals.begin(), s.res.residuals.end())), 1.0,
                          1e-10};
                o.info["roots"] = s.res.roots.size();
                return o;
            });
            push("onshell-numeric", "onshell.eigencheck", d, params, [get] {
                const State& s = get();
                double worst = 0;
                for (const auto& root : s.res.roots)
                    worst = std::max(worst, eigencheck(*s.chain, root, s.probes));
                return Outcome{Scalar::numeric(worst), 1.0, 1e-8};
            });
            push("onshell-numeric", "onshell.dense_eigenvalue", d, params, [get] {
                const State& s = get();
                double worst = 0;
                for (const auto& root : s.res.roots)
                    worst = std::max(worst, nearest_eigenvalue_gap(*s.chain, root, s.probes[0]));
                return Outcome{Scalar::numeric(worst), 1.0, 1e-8};
            });
            push("onshell-numeric", "onshell.tau_residues", d, params, [get] {
                const State& s = get();
                double worst = 0;
                for (const auto& root : s.res.roots) {
                    for (std::size_t j = 0; j < root.u.size(); ++j)
                        worst = std::max(worst, tau_residue_u(j, root).abs());
                    for (std::size_t k = 0; k < root.v.size(); ++k)
                        worst = std::max(worst, tau_residue_v(k, root).abs());
                }
                return Outcome{Scalar::numeric(worst), 1.0, 1e-8};
            });
            // r_3 is the constant kappa_3/kappa_2, so f(v,u) = r_3 gives v = u + c kappa_2/(kappa_3 - kappa_2).
            push("onshell-numeric", "onshell.closed_form", d, params, [this, get, nctx] {
                const State& s = get();
                if (cfg_.twist[2] == cfg_.twist[1])
                    throw ConfigError("twist", "closed form needs kappa_3 != kappa_2");
                const Scalar shift = nctx.c() * cfg_.twist[1].to_mode(Mode::numeric) /
                                     (cfg_.twist[2] - cfg_.twist[1]).to_mode(Mode::numeric);
                double worst = 0;
                for (const auto& root : s.res.roots)
                    worst = std::max(worst, (root.v[0] - root.u[0] - shift).abs());
                return Outcome{Scalar::numeric(worst), 1.0, 1e-8};
            });
            push("onshell-numeric", "onshell.closed_form_exact", d, params, [this, d] {
                if (cfg_.twist[2] == cfg_.twist[1])
                    throw ConfigError("twist", "closed form needs kappa_3 != kappa_2");
                const EvalContext ectx(cfg_.c);
                const VarSet theta = sample_generic(cfg_.L, ectx, derive(cfg_.seed, "onshell.numeric.theta", d));
                const ChainRep ch(theta, cfg_.twist, ectx);
                const Scalar u = sample_generic(1, ectx, derive(cfg_.seed, "onshell.closed_form.u", d), theta)[0];
                const Scalar v = u + ectx.c() * cfg_.twist[1] / (cfg_.twist[2] - cfg_.twist[1]);
                const BetheSystem sys{VarSet{u}, VarSet{v}, chain_weights(ch), ectx};
                return Outcome{bethe_residuals(sys)[1].magnitude()};
            });
        }
    }
};

bool passes(const Outcome& o) {
    if (o.tolerance)
        return o.residual.abs() <= *o.tolerance;
    if (o.residual.is_exact())
        return o.residual.is_zero();
    return o.residual.abs() <= 1e-9 * std::max(1.0, o.scale);
}

json residual_json(const Scalar& r) {
    if (r.is_exact())
        return r.magnitude().str();
    return r.abs();
}

} // namespace

Report run_suite(const SuiteConfig& cfg) {
    validate(cfg);
    Builder builder(cfg);
    builder.build();
    Report report;
    report.config = cfg;
    report.checks.reserve(builder.jobs.size());
    for (auto& job : builder.jobs) {
        CheckRecord rec{job.suite, job.id, job.params, false, nullptr, 0.0};
        const auto start = std::chrono::steady_clock::now();
        try {
            const Outcome o = job.run();
            rec.pass = passes(o);
            rec.residual = residual_json(o.residual);
            for (const auto& [k, v] : o.info.items())
                rec.params[k] = v;
        } catch (const std::exception& e) {
            rec.pass = false;
            rec.residual = "error";
            rec.params["error"] = e.what();
        }
        const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
        rec.ms = std::round(ms.count() * 1000.0) / 1000.0;
        report.checks.push_back(std::move(rec));
    }
    std::vector<std::size_t> order(report.checks.size());
    for (std::size_t k = 0; k < order.size(); ++k)
        order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const auto& a = report.checks[x];
        const auto& b = report.checks[y];
        if (a.id != b.id)
            return a.id < b.id;
        return builder.jobs[x].draw < builder.jobs[y].draw;
    });
    std::vector<CheckRecord> sorted;
    sorted.reserve(order.size());
    for (std::size_t k : order)
        sorted.push_back(std::move(report.checks[k]));
    report.checks = std::move(sorted);
    return report;
}

// ---------------------------------------------------------------- report

std::size_t Report::passed() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return c.pass; }));
}

std::size_t Report::failed() const { return checks.size() - passed(); }

json Report::to_json() const {
    json list = json::array();
    for (const auto& c : checks)
        list.push_back(
            {{"suite", c.suite}, {"id", c.id}, {"params", c.params}, {"pass", c.pass}, {"residual", c.residual},
             {"ms", c.ms}});
    return json{{"version", kVersion},
                {"config", config_to_json(config)},
                {"checks", std::move(list)},
                {"summary", {{"total", checks.size()}, {"passed", passed()}, {"failed", failed()}}}};
}

json report_body(const json& report) {
    json body = report;
    body.erase("version");
    if (body.contains("checks"))
        for (auto& c : body["checks"])
            c.erase("ms");
    return body;
}

std::string format_text(const Report& report) {
    std::ostringstream os;
    const SuiteConfig& cfg = report.config;
    os << kVersion << "  L=" << cfg.L << " c=" << cfg.c.str() << " draws=" << cfg.draws << " seed=" << cfg.seed
       << " mode=" << (cfg.mode == Mode::exact ? "exact" : "numeric") << "\n";
    os << "total " << report.checks.size() << "  passed " << report.passed() << "  failed " << report.failed()
       << "\n\n";
    for (bool failing : {true, false})
        for (const auto& c : report.checks) {
            if (c.pass == failing)
                continue;
            std::ostringstream ms;
            ms.setf(std::ios::fixed);
            ms.precision(1);
            ms << c.ms;
            os << (c.pass ? "PASS  " : "FAIL  ") << c.id << "  " << c.params.dump() << "  residual "
               << (c.residual.is_string() ? c.residual.get<std::string>() : c.residual.dump()) << "  " << ms.str()
               << " ms\n";
        }
    return os.str();
}

void emit_report(const Report& report, const std::string& format, const std::string& path) {
    if (format != "json" && format != "text")
        throw ConfigError("format", "expected json or text, got '" + format + "'");
    const std::string text = format == "json" ? report.to_json().dump(2) + "\n" : format_text(report);
    if (path.empty() || path == "-") {
        std::cout << text << std::flush;
        if (!std::cout)
            throw IoError("cannot write to standard output");
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out << text;
    out.close();
    if (!out)
        throw IoError("write to " + path + " failed");
}

int exit_code(const Report& report) { return report.failed() == 0 ? 0 : 1; }

} // namespace superbethe
