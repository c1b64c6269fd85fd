// xcorr: command-line front end for the correlation measures, tail bounds
// and Monte Carlo harness.
//
// Exit codes: 0 success, 1 usage or input error, 2 refused as too large.
// Results go to stdout (JSON, or CSV with --format csv); diagnostics and
// timings go to stderr.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "xcorr/error.hpp"
#include "xcorr/experiments.hpp"
#include "xcorr/measures.hpp"
#include "xcorr/sequence.hpp"
#include "xcorr/tailmath.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace xcorr;

struct Common {
    std::uint64_t seed = 0;
    int threads = 0;
    std::string format = "json";
    std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool with_seed = true) {
    if (with_seed) cmd->add_option("--seed", c.seed, "Random seed");
    cmd->add_option("--threads", c.threads, "Worker threads (0 = auto)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

json witness_json(const ShiftPattern& w) {
    return json{{"members", w.members}, {"d", w.shifts}, {"m", w.window}};
}

std::string join(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
}

std::string num(double x) {
    std::ostringstream o;
    o.precision(17);
    o << x;
    return o.str();
}

// Writes a new file; existing files are never overwritten.
void write_new_file(const std::string& path, const std::string& content) {
    if (std::filesystem::exists(path)) throw InvalidArgument("refusing to overwrite existing file " + path);
    std::ofstream f(path);
    if (!f) throw InvalidArgument("cannot write " + path);
    f << content;
}

// ---- measure ---------------------------------------------------------------

struct MeasureArgs {
    Common common;
    std::string input;
    std::size_t k = 2;
    std::string measure = "phi";
    std::uint64_t budget = MeasureOptions{}.budget;
    bool force = false;
    bool approx = false;
    std::uint64_t trials = 1'000'000;
};

std::string run_measure(const MeasureArgs& a) {
    const auto seqs = read_sequence_file(a.input);
    MeasureOptions opts;
    opts.threads = a.common.threads;
    opts.budget = a.budget;
    opts.force = a.force;
    RandomStream rng(a.common.seed, 0);

    auto measure_one = [&](auto exact, auto estimate) -> MeasureResult {
        try {
            return exact();
        } catch (const Infeasible&) {
            if (!a.approx) throw;
            return estimate();
        }
    };

    std::vector<MeasureResult> results;
    std::string name = a.measure;
    if (a.measure == "c") {
        for (const auto& s : seqs)
            results.push_back(measure_one([&] { return correlation_measure(s, a.k, opts); },
                                          [&] { return estimate_phi(SequenceFamily({s}), a.k, a.trials, rng, opts.threads); }));
    } else if (a.measure == "phi") {
        const SequenceFamily fam(seqs);
        results.push_back(measure_one([&] { return phi(fam, a.k, opts); },
                                      [&] { return estimate_phi(fam, a.k, a.trials, rng, opts.threads); }));
    } else {
        const GeneratorSample gen(seqs);
        results.push_back(measure_one([&] { return phi_tilde(gen, a.k, opts); },
                                      [&] { return estimate_phi_tilde(gen, a.k, a.trials, rng, opts.threads); }));
        name = "phitilde";
    }

    std::uint64_t best = 0;
    for (const auto& r : results) best = std::max(best, r.value);

    if (a.common.format == "csv") {
        std::string s = "measure,n,k,sequence,value,approximate,witness_members,witness_d,witness_m,evaluated\n";
        for (std::size_t i = 0; i < results.size(); ++i) {
            const auto& r = results[i];
            s += name + "," + std::to_string(seqs.front().size()) + "," + std::to_string(a.k) + "," +
                 std::to_string(i) + "," + std::to_string(r.value) + "," + (r.approximate ? "1" : "0") + "," +
                 join(r.witness.members) + "," + join(r.witness.shifts) + "," + std::to_string(r.witness.window) +
                 "," + std::to_string(r.evaluated) + "\n";
        }
        return s;
    }
    json j;
    j["measure"] = name;
    j["n"] = seqs.front().size();
    j["k"] = a.k;
    j["count"] = seqs.size();
    j["value"] = best;
    if (results.size() == 1) {
        j["approximate"] = results[0].approximate;
        j["witness"] = witness_json(results[0].witness);
        j["evaluated"] = results[0].evaluated;
    } else {
        auto arr = json::array();
        for (std::size_t i = 0; i < results.size(); ++i)
            arr.push_back({{"sequence", i},
                           {"value", results[i].value},
                           {"approximate", results[i].approximate},
                           {"witness", witness_json(results[i].witness)},
                           {"evaluated", results[i].evaluated}});
        j["results"] = arr;
    }
    return j.dump(2) + "\n";
}

// ---- sample ----------------------------------------------------------------

struct SampleArgs {
    Common common;
    std::size_t length = 0;
    std::optional<std::size_t> size;
    std::optional<std::size_t> seeds;
};

std::string run_sample(const SampleArgs& a) {
    RandomStream rng(a.common.seed, 0);
    std::vector<BinarySequence> seqs;
    std::string mode;
    if (a.size) {
        const auto fam = sample_family(a.length, *a.size, rng);
        seqs.assign(fam.members().begin(), fam.members().end());
        mode = "family";
    } else {
        const auto gen = sample_generator(a.length, *a.seeds, rng);
        seqs.assign(gen.images().begin(), gen.images().end());
        mode = "generator";
    }
    if (!a.common.out.empty()) {
        std::ostringstream f;
        f << "# " << mode << " n=" << a.length << " count=" << seqs.size() << " seed=" << a.common.seed << "\n";
        write_sequences(f, seqs);
        write_new_file(a.common.out, f.str());
    }
    if (a.common.format == "csv") {
        std::string s = "index,sequence\n";
        for (std::size_t i = 0; i < seqs.size(); ++i) s += std::to_string(i) + "," + format_sequence(seqs[i]) + "\n";
        return s;
    }
    json j;
    j["mode"] = mode;
    j["n"] = a.length;
    j["seed"] = a.common.seed;
    auto arr = json::array();
    for (const auto& s : seqs) arr.push_back(format_sequence(s));
    j["sequences"] = arr;
    return j.dump(2) + "\n";
}

// ---- mc --------------------------------------------------------------------

struct McArgs {
    Common common;
    std::size_t length = 0;
    std::optional<std::size_t> size;
    std::optional<std::size_t> seeds;
    std::optional<std::size_t> k;
    std::optional<std::size_t> k_min;
    std::optional<std::size_t> k_max;
    std::string measure;
    std::uint64_t trials = 1;
    std::uint64_t budget = MeasureOptions{}.budget;
    bool approx = false;
};

ExperimentConfig mc_config(const McArgs& a) {
    ExperimentConfig c;
    c.length = a.length;
    std::string measure = a.measure;
    if (measure.empty()) measure = a.seeds ? "phitilde" : (a.size ? "phi" : "c");
    if (measure == "phi") {
        if (!a.size) throw InvalidArgument("--measure phi needs --size");
        c.mode = ExperimentMode::family;
        c.cardinality = *a.size;
    } else if (measure == "phitilde") {
        if (!a.seeds) throw InvalidArgument("--measure phitilde needs --seeds");
        c.mode = ExperimentMode::generator;
        c.cardinality = *a.seeds;
    } else {
        if (a.size || a.seeds) throw InvalidArgument("--measure c takes neither --size nor --seeds");
        c.mode = ExperimentMode::single;
        c.cardinality = 1;
    }
    if (a.k) {
        if (a.k_min || a.k_max) throw InvalidArgument("use either --k or --k-min/--k-max");
        c.k_min = c.k_max = *a.k;
    } else {
        if (!a.k_min || !a.k_max) throw InvalidArgument("need --k or both --k-min and --k-max");
        c.k_min = *a.k_min;
        c.k_max = *a.k_max;
    }
    c.trials = a.trials;
    c.seed = a.common.seed;
    c.budget = a.budget;
    c.allow_approx = a.approx;
    c.threads = a.common.threads;
    return c;
}

std::string run_mc(const McArgs& a) {
    const ExperimentConfig c = mc_config(a);
    const auto start = std::chrono::steady_clock::now();
    const auto records = run_trials(c);
    const auto stop = std::chrono::steady_clock::now();
    std::cerr << "mc: " << records.size() << " records in "
              << std::chrono::duration<double, std::milli>(stop - start).count() << " ms\n";

    if (!a.common.out.empty()) {
        std::string lines;
        for (const auto& r : records) lines += to_jsonl(r) + "\n";
        write_new_file(a.common.out, lines);
    }
    if (a.common.format == "csv") {
        std::string s = csv_header() + "\n";
        for (const auto& r : records) s += to_csv(r) + "\n";
        return s;
    }
    json j;
    j["config"] = {{"n", c.length},           {"mode", mode_name(c.mode)}, {"measure", measure_name(c.mode)},
                   {"cardinality", c.cardinality}, {"k_min", c.k_min},       {"k_max", c.k_max},
                   {"trials", c.trials},      {"seed", c.seed},            {"budget", c.budget},
                   {"approx", c.allow_approx}};
    j["summary"] = summarize(records);
    return j.dump(2) + "\n";
}

// ---- bounds ----------------------------------------------------------------

struct BoundsArgs {
    Common common;
    std::uint64_t length = 0;
    std::uint64_t k = 2;
    std::uint64_t cardinality = 1;
    std::string which = "family";
};

std::string run_bounds(const BoundsArgs& a) {
    const BandKind kind = a.which == "family"      ? BandKind::family
                          : a.which == "generator" ? BandKind::generator
                                                   : BandKind::single_sequence;
    const Band b = theorem_band(a.length, a.k, a.cardinality, kind);
    for (const auto& w : b.warnings) std::cerr << "warning: " << w << "\n";
    if (a.common.format == "csv")
        return "n,k,cardinality,which,lower,upper,base\n" + std::to_string(a.length) + "," + std::to_string(a.k) +
               "," + std::to_string(a.cardinality) + "," + a.which + "," + num(b.lower) + "," + num(b.upper) + "," +
               num(b.base) + "\n";
    json j{{"n", a.length}, {"k", a.k},         {"cardinality", a.cardinality}, {"which", a.which},
           {"lower", b.lower}, {"upper", b.upper}, {"base", b.base},               {"warnings", b.warnings}};
    return j.dump(2) + "\n";
}

// ---- tails -----------------------------------------------------------------

struct TailsArgs {
    Common common;
    std::uint64_t n = 0;
    std::optional<std::int64_t> t;
    bool exact = false;
    std::optional<double> c;
    std::string form = "integral";
    std::optional<double> a;
    std::optional<std::int64_t> point;
};

std::string run_tails(const TailsArgs& a) {
    json j;
    j["n"] = a.n;
    if (a.t) {
        const TailMode mode = a.exact ? TailMode::exact_rational : TailMode::exact_float;
        j["t"] = *a.t;
        j["mode"] = a.exact ? "exact-rational" : "exact-float";
        j["probability"] = binom_tail_exact(a.n, *a.t, mode);
    } else if (a.c) {
        const auto form = a.form == "closed" ? MoivreLaplaceForm::closed : MoivreLaplaceForm::integral;
        const double approx = ml_tail(*a.c, form);
        const double x = std::floor(static_cast<double>(a.n) / 2) + *a.c * std::sqrt(static_cast<double>(a.n));
        const double exact = binom_tail_at_least(a.n, x);
        j["c"] = *a.c;
        j["form"] = a.form;
        j["approximation"] = approx;
        j["exact"] = exact;
        j["ratio"] = exact / approx;
    } else if (a.a) {
        j["a"] = *a.a;
        j["bound"] = hoeffding_bound(a.n, *a.a);
        j["exact"] = signed_walk_tail(a.n, *a.a);
    } else if (a.point) {
        const PointBound pb = binom_point_lower_bound(a.n, *a.point);
        j["c"] = *a.point;
        j["bound"] = pb.bound;
        j["exact"] = pb.exact;
        j["ratio"] = pb.ratio();
    } else {
        throw InvalidArgument("tails needs one of --t, --c, --a, --point");
    }
    if (a.common.format == "csv") {
        std::string head, row;
        for (auto it = j.begin(); it != j.end(); ++it) {
            head += (head.empty() ? "" : ",") + it.key();
            row += (row.empty() ? "" : ",") +
                   (it->is_string() ? it->get<std::string>()
                    : it->is_number_float() ? num(it->get<double>())
                                            : it->dump());
        }
        return head + "\n" + row + "\n";
    }
    return j.dump(2) + "\n";
}

// ---- rk --------------------------------------------------------------------

struct RkArgs {
    Common common;
    std::uint64_t length = 0;
    std::uint64_t k = 2;
    std::uint64_t seeds = 2;
};

std::string run_rk(const RkArgs& a) {
    const RkThreshold r = rk_threshold(a.length, a.k, a.seeds);
    if (!r.satisfied) std::cerr << "warning: threshold not met even at r = 0\n";
    if (a.common.format == "csv")
        return "n,k,seeds,m,regime,r,satisfied,threshold\n" + std::to_string(a.length) + "," + std::to_string(a.k) +
               "," + std::to_string(a.seeds) + "," + std::to_string(r.m) + "," + std::to_string(r.regime) + "," +
               std::to_string(r.r) + "," + (r.satisfied ? "1" : "0") + "," + num(std::exp(r.log_threshold)) + "\n";
    json j{{"n", a.length},
           {"k", a.k},
           {"seeds", a.seeds},
           {"m", r.m},
           {"regime", r.regime},
           {"r", r.r},
           {"satisfied", r.satisfied},
           {"threshold", std::exp(r.log_threshold)},
           {"log_threshold", r.log_threshold}};
    return j.dump(2) + "\n";
}

// ---- oracle ----------------------------------------------------------------

struct OracleArgs {
    Common common;
    std::size_t length = 0;
    std::size_t size = 1;
    std::size_t k = 2;
    std::optional<std::uint64_t> trials;
};

std::string run_oracle(const OracleArgs& a) {
    const DistributionOracle o = exact_distribution_oracle(a.length, a.size, a.k, a.common.threads);
    std::optional<Pmf> mc;
    if (a.trials) {
        ExperimentConfig c;
        c.length = a.length;
        c.cardinality = a.size;
        c.k_min = c.k_max = a.k;
        c.trials = *a.trials;
        c.seed = a.common.seed;
        c.threads = a.common.threads;
        c.budget = UINT64_MAX;
        const auto records = run_trials(c);
        mc = empirical_pmf(records, a.k);
    }
    if (a.common.format == "csv") {
        std::string s = mc ? "value,probability,empirical\n" : "value,probability\n";
        std::map<std::uint64_t, bool> keys;
        for (const auto& [v, p] : o.pmf) keys[v] = true;
        if (mc)
            for (const auto& [v, p] : *mc) keys[v] = true;
        for (const auto& [v, _] : keys) {
            const auto it = o.pmf.find(v);
            s += std::to_string(v) + "," + num(it == o.pmf.end() ? 0.0 : it->second);
            if (mc) {
                const auto jt = mc->find(v);
                s += "," + num(jt == mc->end() ? 0.0 : jt->second);
            }
            s += "\n";
        }
        return s;
    }
    json j;
    j["n"] = a.length;
    j["size"] = a.size;
    j["k"] = a.k;
    j["families"] = o.families;
    auto pmf = json::array();
    for (const auto& [v, p] : o.pmf) pmf.push_back({{"value", v}, {"probability", p}});
    j["pmf"] = pmf;
    if (mc) {
        auto emp = json::array();
        for (const auto& [v, p] : *mc) emp.push_back({{"value", v}, {"probability", p}});
        j["trials"] = *a.trials;
        j["seed"] = a.common.seed;
        j["empirical"] = emp;
        j["total_variation"] = total_variation(o.pmf, *mc);
    }
    return j.dump(2) + "\n";
}

// ---- collide ---------------------------------------------------------------

struct CollideArgs {
    Common common;
    std::size_t length = 0;
    std::size_t seeds = 2;
    std::uint64_t trials = 1;
};

std::string run_collide(const CollideArgs& a) {
    const CollisionReport r = collision_experiment(a.length, a.seeds, a.trials, a.common.seed, a.common.threads);
    if (a.common.format == "csv")
        return "n,seeds,trials,collision_free,empirical,formula,standard_error\n" + std::to_string(a.length) + "," +
               std::to_string(a.seeds) + "," + std::to_string(r.trials) + "," + std::to_string(r.collision_free) +
               "," + num(r.empirical) + "," + num(r.formula) + "," + num(r.standard_error) + "\n";
    json j{{"n", a.length},
           {"seeds", a.seeds},
           {"trials", r.trials},
           {"seed", a.common.seed},
           {"collision_free", r.collision_free},
           {"empirical", r.empirical},
           {"formula", r.formula},
           {"standard_error", r.standard_error}};
    return j.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlation measures of binary sequences and families"};
    app.require_subcommand(1);

    MeasureArgs ma;
    auto* measure = app.add_subcommand("measure", "Compute C_k, Phi_k or Phi~_k of sequences in a file");
    measure->add_option("--input", ma.input, "Sequence file")->required()->check(CLI::ExistingFile);
    measure->add_option("--k", ma.k, "Order")->required();
    measure->add_option("--measure", ma.measure, "Measure")->check(CLI::IsMember({"c", "phi", "phitilde"}));
    measure->add_option("--budget", ma.budget, "Max configurations for exact enumeration");
    measure->add_flag("--force", ma.force, "Ignore the budget");
    measure->add_flag("--approx", ma.approx, "Fall back to the randomized estimator over budget");
    measure->add_option("--trials", ma.trials, "Estimator samples with --approx");
    add_common(measure, ma.common);

    SampleArgs sa;
    auto* sample = app.add_subcommand("sample", "Sample a random family or generator");
    sample->add_option("--length", sa.length, "Sequence length")->required();
    auto* s_size = sample->add_option("--size", sa.size, "Family size");
    auto* s_seeds = sample->add_option("--seeds", sa.seeds, "Generator seed count");
    s_size->excludes(s_seeds);
    sample->add_option("--out", sa.common.out, "Also write a sequence file (must not exist)");
    add_common(sample, sa.common);

    McArgs mca;
    auto* mc = app.add_subcommand("mc", "Monte Carlo trials against the typical-value band");
    mc->add_option("--length", mca.length, "Sequence length")->required();
    auto* m_size = mc->add_option("--size", mca.size, "Family size");
    auto* m_seeds = mc->add_option("--seeds", mca.seeds, "Generator seed count");
    m_size->excludes(m_seeds);
    mc->add_option("--k", mca.k, "Order");
    mc->add_option("--k-min", mca.k_min, "Smallest order");
    mc->add_option("--k-max", mca.k_max, "Largest order");
    mc->add_option("--measure", mca.measure, "Measure")->check(CLI::IsMember({"c", "phi", "phitilde"}));
    mc->add_option("--trials", mca.trials, "Number of trials")->check(CLI::PositiveNumber);
    mc->add_option("--budget", mca.budget, "Max configurations per exact computation");
    mc->add_flag("--approx", mca.approx, "Use the randomized estimator over budget");
    mc->add_option("--out", mca.common.out, "Write JSON Lines run records to a new file");
    add_common(mc, mca.common);

    BoundsArgs ba;
    auto* bounds = app.add_subcommand("bounds", "Typical-value band");
    bounds->add_option("--length", ba.length, "Sequence length")->required();
    bounds->add_option("--k", ba.k, "Order")->required();
    bounds->add_option("--cardinality", ba.cardinality, "|F| or |S|");
    bounds->add_option("--which", ba.which, "Band")->check(CLI::IsMember({"family", "generator", "single"}));
    add_common(bounds, ba.common, false);

    TailsArgs ta;
    auto* tails = app.add_subcommand("tails", "Binomial tail probabilities and bounds");
    tails->add_option("--n", ta.n, "Trials")->required();
    auto* t_t = tails->add_option("--t", ta.t, "P(S >= t)");
    tails->add_flag("--exact", ta.exact, "Use the big-rational route (n <= 256)");
    auto* t_c = tails->add_option("--c", ta.c, "de Moivre-Laplace offset c");
    tails->add_option("--form", ta.form, "integral or closed")->check(CLI::IsMember({"integral", "closed"}));
    auto* t_a = tails->add_option("--a", ta.a, "Hoeffding deviation a");
    auto* t_p = tails->add_option("--point", ta.point, "Point mass offset c");
    t_t->excludes(t_c)->excludes(t_a)->excludes(t_p);
    t_c->excludes(t_a)->excludes(t_p);
    t_a->excludes(t_p);
    add_common(tails, ta.common, false);

    RkArgs ra;
    auto* rk = app.add_subcommand("rk", "Tail threshold r_k(m, S)");
    rk->add_option("--length", ra.length, "Sequence length N")->required();
    rk->add_option("--k", ra.k, "Order")->required();
    rk->add_option("--seeds", ra.seeds, "Seed count |S|")->required();
    add_common(rk, ra.common, false);

    OracleArgs oa;
    auto* oracle = app.add_subcommand("oracle", "Exact distribution of Phi_k over all families");
    oracle->add_option("--length", oa.length, "Sequence length")->required();
    oracle->add_option("--size", oa.size, "Family size")->required();
    oracle->add_option("--k", oa.k, "Order")->required();
    oracle->add_option("--trials", oa.trials, "Also sample this many families and compare");
    add_common(oracle, oa.common);

    CollideArgs ca;
    auto* collide = app.add_subcommand("collide", "Empirical collision-free rate of random generators");
    collide->add_option("--length", ca.length, "Sequence length")->required();
    collide->add_option("--seeds", ca.seeds, "Seed count")->required();
    collide->add_option("--trials", ca.trials, "Trials")->check(CLI::PositiveNumber);
    add_common(collide, ca.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        std::string out;
        if (*measure) out = run_measure(ma);
        else if (*sample) {
            if (!sa.size && !sa.seeds) throw InvalidArgument("sample needs --size or --seeds");
            out = run_sample(sa);
        } else if (*mc) out = run_mc(mca);
        else if (*bounds) out = run_bounds(ba);
        else if (*tails) out = run_tails(ta);
        else if (*rk) out = run_rk(ra);
        else if (*oracle) out = run_oracle(oa);
        else if (*collide) out = run_collide(ca);
        std::cout << out;
        return 0;
    } catch (const Infeasible& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
