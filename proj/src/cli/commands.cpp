#include "totient/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "totient/attack.hpp"
#include "totient/bounds.hpp"
#include "totient/dataset.hpp"
#include "totient/errors.hpp"
#include "totient/metrics.hpp"
#include "totient/plot.hpp"
#include "totient/regress.hpp"
#include "totient/samples.hpp"

namespace totient::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Budget exhaustion is reported through the exit code, not an exception.
struct AttackResult {
    nlohmann::json json;
    bool success;
};

nlohmann::json decimal_json(const Rational& v, unsigned digits) {
    auto j = rational_to_json(v);
    j["decimal"] = render_decimal(v, digits);
    return j;
}

nlohmann::json stats_json(const DatasetStats& s, unsigned digits) {
    auto q = [&](const QuantityStats& v) {
        return nlohmann::json{{"min", v.min.get_str()}, {"max", v.max.get_str()}, {"mean", decimal_json(v.mean, digits)}};
    };
    return {{"count", s.count}, {"n", q(s.n)}, {"prime_sum", q(s.prime_sum)}, {"epsilon", q(s.epsilon)}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text_file(path, j.dump(2) + "\n"); }

void require_bits(unsigned bits) {
    if (bits < 8 || bits % 2 != 0) throw UsageError("--bits must be even and >= 8");
}

void require_count(const RunConfig& c) {
    if (c.count < 1) throw UsageError("--count must be >= 1");
    if (c.count > kDeskScaleLimit && !c.large)
        throw UsageError("--count above " + std::to_string(kDeskScaleLimit) + " requires --large");
}

Rational parse_fraction(const std::string& text) {
    Rational r;
    const auto dot = text.find('.');
    if (dot != std::string::npos && text.find('/') == std::string::npos) {
        const std::string whole = text.substr(0, dot), frac = text.substr(dot + 1);
        mpz_class w = 0, f = 0;
        if ((!whole.empty() && !parse_decimal(whole, w)) || frac.empty() || !parse_decimal(frac, f))
            throw UsageError("malformed fraction '" + text + "'");
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        r = make_rational(w * scale + f, scale);
    } else if (!parse_rational(text, r)) {
        throw UsageError("malformed fraction '" + text + "'");
    }
    if (r <= 0 || r >= 1) throw UsageError("--train-fraction must lie strictly between 0 and 1");
    return r;
}

Natural parse_natural(const std::string& text, const char* flag) {
    Natural v;
    if (!parse_decimal(text, v)) throw UsageError(std::string(flag) + ": expected a non-negative decimal integer");
    return v;
}

SplitSpec split_spec(const RunConfig& c, std::uint64_t dataset_seed) {
    return SplitSpec{c.train_fraction, split_seed_for(dataset_seed)};
}

std::vector<RsaSample> select_split(const Dataset& d, const RunConfig& c) {
    if (c.split == "all") return d.samples;
    auto parts = split(d.samples, split_spec(c, d.header.master_seed));
    return c.split == "train" ? std::move(parts.train) : std::move(parts.test);
}

template <class Acc>
Acc accumulate_parallel(std::span<const RsaSample> samples, unsigned threads) {
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(samples.size(), 1));
    std::vector<Acc> parts(workers);
    auto run = [&](std::size_t w) {
        const std::size_t lo = samples.size() * w / workers, hi = samples.size() * (w + 1) / workers;
        for (std::size_t i = lo; i < hi; ++i) parts[w].add(samples[i]);
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    }
    Acc total;
    for (const auto& p : parts) total.merge(p);
    return total;
}

LinearModel fit_model(FitMode mode, const DatasetHeader& header, std::span<const RsaSample> train, unsigned threads) {
    LinearModel m;
    switch (mode) {
        case FitMode::free_ols: m = fit_free_ols(accumulate_parallel<OlsSums>(train, threads)); break;
        case FitMode::half_slope: m = fit_half_slope(accumulate_parallel<OlsSums>(train, threads)); break;
        case FitMode::conservative:
            m = fit_conservative(accumulate_parallel<ConservativeAccumulator>(train, threads));
            break;
        case FitMode::provable: m = fit_provable(header.modulus_bits); break;
    }
    m.modulus_bits = header.modulus_bits;
    m.master_seed = header.master_seed;
    return m;
}

// Samples where the model over-predicts epsilon.
std::uint64_t count_violations(const LinearModel& m, std::span<const RsaSample> samples) {
    return static_cast<std::uint64_t>(std::count_if(samples.begin(), samples.end(), [&](const RsaSample& s) {
        return predict(m, s.n) > Rational(s.epsilon);
    }));
}

// Attaches test metrics when they are defined (needs >= 2 distinct test targets).
std::optional<std::string> attach_metrics(LinearModel& m, std::span<const RsaSample> test, const RunConfig& c) {
    if (test.empty()) return "test split is empty; metrics not attached";
    try {
        m.metrics = evaluate(m, test, c.threads, c.metric_digits);
    } catch (const DomainError& e) {
        return std::string("metrics not attached: ") + e.what();
    }
    return std::nullopt;
}

nlohmann::json model_summary(const LinearModel& m, unsigned digits) {
    nlohmann::json j{{"mode", std::string(to_string(m.mode))},
                     {"slope", decimal_json(m.slope, digits)},
                     {"intercept", decimal_json(m.intercept, digits)},
                     {"alpha", decimal_json(m.alpha(), digits)},
                     {"train_count", m.train_count}};
    if (m.metrics) j["metrics"] = metrics_to_json(*m.metrics);
    return j;
}

struct BoundsTally {
    std::uint64_t rows = 0;
    std::uint64_t learned_pass = 0, kendall_pass = 0, hatalova_pass = 0, sierpinski_pass = 0;
    std::uint64_t learned_above_kendall = 0;

    nlohmann::json json() const {
        return {{"rows", rows},
                {"learned_pass", learned_pass},
                {"kendall_pass", kendall_pass},
                {"hatalova_pass", hatalova_pass},
                {"sierpinski_pass", sierpinski_pass},
                {"learned_above_kendall", learned_above_kendall},
                {"fang", "main term reported only, not checked"}};
    }
};

BoundsTally write_bounds(std::ostream& csv, std::span<const RsaSample> samples, const LinearModel* model,
                         unsigned precision) {
    BoundsTally t;
    csv << bounds_csv_header() << '\n';
    for (const auto& s : samples) {
        const auto r = compare(s.n, std::make_pair(s.p, s.q), model, precision);
        csv << bounds_csv_row(r) << '\n';
        ++t.rows;
        t.learned_pass += r.learned_ok.value_or(false);
        t.kendall_pass += r.kendall_ok.value_or(false);
        t.hatalova_pass += r.hatalova_ok.value_or(false);
        t.sierpinski_pass += r.sierpinski_ok.value_or(false);
        if (r.learned_lower && r.kendall_lower && *r.learned_lower > *r.kendall_lower) ++t.learned_above_kendall;
    }
    return t;
}

nlohmann::json write_window(const std::filesystem::path& csv_path, const std::filesystem::path& json_path,
                            const LinearModel& model, std::span<const RsaSample> samples, unsigned digits) {
    const auto report = window_report(model, samples);
    std::string csv = window_csv_header() + "\n";
    for (const auto& e : report.entries) csv += window_csv_row(e) + "\n";
    write_text_file(csv_path, csv);
    auto summary = window_summary_json(report.summary, digits);
    write_json(json_path, summary);
    return summary;
}

void write_plots(const std::filesystem::path& dir, const LinearModel& model, std::span<const RsaSample> samples,
                 unsigned bins, unsigned bits) {
    if (samples.empty()) throw DomainError("nothing to plot: selected split is empty");
    std::vector<Rational> truth, predicted;
    truth.reserve(samples.size());
    predicted.reserve(samples.size());
    for (const auto& s : samples) {
        truth.emplace_back(s.epsilon);
        predicted.push_back(predict(model, s.n));
    }
    const std::string size = std::to_string(bits) + "-bit modulus";
    scatter_svg(truth, predicted, dir / "scatter.svg", {"Predicted vs true epsilon (" + size + ")", "true epsilon", "predicted epsilon"});
    write_text_file(dir / "scatter.csv", scatter_csv(truth, predicted));

    const auto res = residuals(model, samples);
    const auto hist = histogram(res, HistogramSpec{bins});
    histogram_svg(hist, dir / "residual_hist.svg", {"Residual distribution (" + size + ")", "true - predicted", "count"});
    write_text_file(dir / "residual_hist.csv", histogram_csv(hist));
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

LinearModel require_model(const RunConfig& c) {
    if (c.model.empty()) throw UsageError("--model is required");
    return load_model(c.model);
}

AttackResult run_attack(const RunConfig& c) {
    Natural n;
    std::optional<std::pair<Natural, Natural>> truth;
    if (!c.n_text.empty()) {
        n = parse_natural(c.n_text, "--n");
        if (!c.p_text.empty() && !c.q_text.empty())
            truth = std::make_pair(parse_natural(c.p_text, "--p"), parse_natural(c.q_text, "--q"));
    } else if (!c.input.empty()) {
        DatasetFile file(c.input, c.strict);
        const std::uint64_t row = c.row.value_or(0);
        std::optional<RsaSample> s;
        for (std::uint64_t i = 0; i <= row; ++i) {
            s = file.next();
            if (!s) throw UsageError("--row " + std::to_string(row) + " is past the end of " + c.input.string());
        }
        n = s->n;
        truth = std::make_pair(s->p, s->q);
    } else {
        throw UsageError("attack needs --n or --in");
    }
    if (mpz_even_p(n.get_mpz_t()) || n < 9) throw UsageError("--n must be an odd semiprime candidate");
    if (truth && truth->first * truth->second != n) throw UsageError("--p * --q != --n");

    Integer start;
    if (c.baseline) {
        start = fermat_floor(n);
    } else {
        start = predicted_sum(require_model(c), n);
    }
    nlohmann::json j{{"n", n.get_str()}, {"mode", c.baseline ? "fermat_baseline" : "model_seeded"},
                     {"budget", c.budget}};
    std::optional<Natural> window;
    if (truth) {
        const Integer true_sum = truth->first + truth->second;
        window = abs(true_sum - start);
        j["window"] = window->get_str();
        j["window_bits"] = bit_length(*window);
        j["expected_cost"] = search_cost(n, start, true_sum).get_str();
        if (bit_length(*window) > kMaxSearchWindowBits && !c.force) {
            j["attempted"] = false;
            j["success"] = false;
            j["start_sum"] = start.get_str();
            j["reason"] = "window exceeds 2^" + std::to_string(kMaxSearchWindowBits) + "; pass --force to search anyway";
            return {j, false};
        }
    }
    auto outcome = fermat_search(n, start, c.budget);
    outcome.window = window;
    j.update(outcome_json(outcome));
    j["attempted"] = true;
    return {j, outcome.success};
}

void add_common(CLI::App* sub, RunConfig& c) {
    sub->add_option("--threads", c.threads, "Worker threads; outputs do not depend on it")->check(CLI::Range(1u, 1024u));
}

void add_dataset_in(CLI::App* sub, RunConfig& c, bool required) {
    auto* o = sub->add_option("--in", c.input, "Dataset CSV");
    if (required) o->required();
    sub->add_flag("!--no-strict", c.strict, "Skip per-row invariant checks");
}

void add_split(CLI::App* sub, RunConfig& c, std::string& fraction_text) {
    sub->add_option("--train-fraction", fraction_text, "Training share, e.g. 4/5 or 0.8")->default_str("4/5");
    sub->add_option("--split", c.split, "Rows to use: all, train or test")
        ->check(CLI::IsMember({"all", "train", "test"}));
}

}  // namespace

std::uint64_t split_seed_for(std::uint64_t master_seed) { return mix64(master_seed ^ 0x73706c6974ULL); }

int cmd_generate(const RunConfig& c, std::ostream& out) {
    require_bits(c.bits);
    require_count(c);
    if (c.output.empty()) throw UsageError("--out is required");
    const DatasetHeader header{c.bits, c.count, c.master_seed, kDatasetFormatVersion};
    std::ofstream file(c.output, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open " + c.output.string() + " for writing");
    CsvWriter writer(file, header);
    StatsAccumulator acc;
    generate_dataset_blocks(c.bits, c.count, c.master_seed, c.threads, 1 << 14, [&](std::span<const RsaSample> block) {
        writer.write(block);
        for (const auto& s : block) acc.add(s);
    });
    file.flush();
    if (!file) throw IoError("write failed: " + c.output.string());
    out << nlohmann::json{{"dataset", c.output.string()}, {"bits", c.bits}, {"seed", c.master_seed},
                          {"stats", stats_json(acc.result(), c.metric_digits)}}
                .dump(2)
        << '\n';
    return kOk;
}

int cmd_fit(const RunConfig& c, std::ostream& out) {
    if (c.input.empty() || c.output.empty()) throw UsageError("fit needs --in and --out");
    const Dataset d = read_csv(c.input, c.strict);
    auto parts = split(d.samples, split_spec(c, d.header.master_seed));
    LinearModel m = fit_model(c.mode, d.header, parts.train, c.threads);
    const auto note = attach_metrics(m, parts.test, c);
    save_model(m, c.output);

    auto j = model_summary(m, c.metric_digits);
    j["model"] = c.output.string();
    j["train_rows"] = parts.train.size();
    j["test_rows"] = parts.test.size();
    j["train_violations"] = count_violations(m, parts.train);
    j["test_violations"] = count_violations(m, parts.test);
    if (note) j["note"] = *note;
    out << j.dump(2) << '\n';
    return kOk;
}

int cmd_eval(const RunConfig& c, std::ostream& out) {
    if (c.input.empty()) throw UsageError("eval needs --in");
    const LinearModel m = require_model(c);
    const Dataset d = read_csv(c.input, c.strict);
    const auto rows = select_split(d, c);
    if (rows.empty()) throw DomainError("selected split is empty");
    const auto report = evaluate(m, rows, c.threads, c.metric_digits);
    nlohmann::json j = metrics_to_json(report);
    j["split"] = c.split;
    j["violations"] = count_violations(m, rows);
    if (!c.output.empty()) write_json(c.output, j);
    out << j.dump(2) << '\n';
    return kOk;
}

int cmd_bounds(const RunConfig& c, std::ostream& out) {
    std::optional<LinearModel> model;
    if (!c.model.empty()) model = load_model(c.model);
    if (model && !model->has_half_slope()) throw UsageError("bounds needs a slope-1/2 model");
    const LinearModel* mp = model ? &*model : nullptr;

    if (!c.n_text.empty()) {
        const Natural n = parse_natural(c.n_text, "--n");
        std::optional<std::pair<Natural, Natural>> factors;
        if (!c.p_text.empty() && !c.q_text.empty())
            factors = std::make_pair(parse_natural(c.p_text, "--p"), parse_natural(c.q_text, "--q"));
        if (n < 1) throw UsageError("--n must be >= 1");
        const auto r = compare(n, factors, mp, c.bound_precision);
        out << bounds_csv_header() << '\n' << bounds_csv_row(r) << '\n';
        return kOk;
    }
    if (c.input.empty()) throw UsageError("bounds needs --n or --in");
    const Dataset d = read_csv(c.input, c.strict);
    const auto rows = select_split(d, c);
    BoundsTally tally;
    if (c.output.empty()) {
        tally = write_bounds(out, rows, mp, c.bound_precision);
    } else {
        std::ofstream csv(c.output, std::ios::binary | std::ios::trunc);
        if (!csv) throw IoError("cannot open " + c.output.string() + " for writing");
        tally = write_bounds(csv, rows, mp, c.bound_precision);
        if (!csv) throw IoError("write failed: " + c.output.string());
        out << tally.json().dump(2) << '\n';
    }
    return kOk;
}

int cmd_attack(const RunConfig& c, std::ostream& out) {
    if (!c.input.empty() && c.n_text.empty() && !c.row) {
        // Whole-file mode: window report only.
        if (c.output.empty()) throw UsageError("window report needs --out <prefix>");
        const LinearModel m = require_model(c);
        const Dataset d = read_csv(c.input, c.strict);
        const auto rows = select_split(d, c);
        std::filesystem::path csv = c.output, json = c.output;
        csv += ".csv";
        json += ".json";
        out << write_window(csv, json, m, rows, c.metric_digits).dump(2) << '\n';
        return kOk;
    }
    const auto result = run_attack(c);
    if (!c.output.empty()) write_json(c.output, result.json);
    out << result.json.dump(2) << '\n';
    return result.success ? kOk : kBudgetExhausted;
}

int cmd_plot(const RunConfig& c, std::ostream& out) {
    if (c.input.empty() || c.output.empty()) throw UsageError("plot needs --in and --out <dir>");
    const LinearModel m = require_model(c);
    const Dataset d = read_csv(c.input, c.strict);
    const auto rows = select_split(d, c);
    ensure_dir(c.output);
    write_plots(c.output, m, rows, c.bins, d.header.modulus_bits);
    out << nlohmann::json{{"scatter", (c.output / "scatter.svg").string()},
                          {"histogram", (c.output / "residual_hist.svg").string()},
                          {"rows", rows.size()}}
                .dump(2)
        << '\n';
    return kOk;
}

int cmd_pipeline(const RunConfig& c, std::ostream& out) {
    require_bits(c.bits);
    require_count(c);
    if (c.output.empty()) throw UsageError("--out <dir> is required");
    ensure_dir(c.output);
    const auto& dir = c.output;

    // 1. Generate.
    const DatasetHeader header{c.bits, c.count, c.master_seed, kDatasetFormatVersion};
    const auto samples = generate_dataset(c.bits, c.count, c.master_seed, c.threads);
    write_csv(header, samples, dir / "dataset.csv");

    // 2. Split and fit.
    auto parts = split(samples, SplitSpec{c.train_fraction, split_seed_for(c.master_seed)});
    LinearModel m = fit_model(c.mode, header, parts.train, c.threads);

    // 3. Evaluate on the held-out split.
    const auto note = attach_metrics(m, parts.test, c);
    save_model(m, dir / "model.json");
    if (m.metrics) write_json(dir / "metrics.json", metrics_to_json(*m.metrics));

    nlohmann::json summary;
    summary["bits"] = c.bits;
    summary["count"] = c.count;
    summary["seed"] = c.master_seed;
    summary["budget"] = c.budget;
    summary["train_rows"] = parts.train.size();
    summary["test_rows"] = parts.test.size();
    summary["dataset"] = stats_json(stats(samples), c.metric_digits);
    summary["model"] = model_summary(m, c.metric_digits);
    summary["train_violations"] = count_violations(m, parts.train);
    summary["test_violations"] = count_violations(m, parts.test);
    if (note) summary["note"] = *note;

    const auto& eval_rows = parts.test.empty() ? parts.train : parts.test;

    // 4. Bounds.
    if (m.has_half_slope()) {
        std::ofstream csv(dir / "bounds.csv", std::ios::binary | std::ios::trunc);
        if (!csv) throw IoError("cannot open " + (dir / "bounds.csv").string());
        summary["bounds"] = write_bounds(csv, eval_rows, &m, c.bound_precision).json();
        if (!csv) throw IoError("write failed: " + (dir / "bounds.csv").string());

        // 5. Prime-sum windows.
        summary["window"] = write_window(dir / "window.csv", dir / "window.json", m, eval_rows, c.metric_digits);
    } else {
        std::ofstream csv(dir / "bounds.csv", std::ios::binary | std::ios::trunc);
        summary["bounds"] = write_bounds(csv, eval_rows, nullptr, c.bound_precision).json();
        summary["window"] = "skipped: model slope is not 1/2";
    }

    // 6. Figures.
    write_plots(dir, m, eval_rows, c.bins, c.bits);

    write_json(dir / "summary.json", summary);
    out << summary.dump(2) << '\n';
    return kOk;
}

// Rewrites "--config FILE" into the equivalent "--key value" arguments.
// Keys already given on the command line win; "key = true/false" toggles
// flags. Blank lines, "# comments" and "[section]" headers are ignored.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    auto it = std::find(args.begin(), args.end(), "--config");
    if (it == args.end()) return args;
    if (std::next(it) == args.end()) throw UsageError("--config needs a file");
    const std::string file = *std::next(it);
    it = args.erase(it, it + 2);
    if (std::find(args.begin(), args.end(), "--config") != args.end())
        throw UsageError("--config given more than once");

    std::ifstream in(file);
    if (!in) throw UsageError("cannot read config file '" + file + "'");
    auto trim = [](std::string v) {
        const auto b = v.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string{};
        return v.substr(b, v.find_last_not_of(" \t\r") - b + 1);
    };
    auto given = [&](const std::string& flag) {
        return std::any_of(args.begin(), args.end(),
                           [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    };
    std::vector<std::string> extra;
    std::string line;
    unsigned line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(file + ":" + std::to_string(line_no) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        std::replace(key.begin(), key.end(), '_', '-');
        if (key.empty()) throw UsageError(file + ":" + std::to_string(line_no) + ": empty key");
        std::string flag = "--" + key;
        if (key == "strict") {
            if (value == "false" && !given("--no-strict")) extra.push_back("--no-strict");
            continue;
        }
        if (given(flag)) continue;
        if (value == "true") {
            extra.push_back(flag);
        } else if (value != "false") {
            extra.push_back(flag);
            extra.push_back(value);
        }
    }
    args.insert(it, extra.begin(), extra.end());
    return args;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact linear predictors of the RSA totient parameter epsilon", "totient"};
    app.require_subcommand(1);
    app.footer("Any subcommand also accepts --config FILE: key=value lines using the flag names\n"
               "(bits=64, train-fraction=4/5, large=true). Flags on the command line take precedence.");
    RunConfig c;
    std::string fraction_text = "4/5";
    std::string mode_text = "half_slope";

    auto* gen = app.add_subcommand("generate", "Generate a semiprime dataset");
    add_common(gen, c);
    gen->add_option("--bits", c.bits, "Modulus size in bits (even, >= 8)")->required();
    gen->add_option("--count", c.count, "Number of samples")->default_val(kDefaultCount);
    gen->add_option("--seed", c.master_seed, "Master seed")->default_val(1);
    gen->add_option("--out", c.output, "Output CSV")->required();
    gen->add_flag("--large", c.large, "Allow counts above the desk-scale limit");

    auto* fit = app.add_subcommand("fit", "Split a dataset and fit a predictor");
    add_common(fit, c);
    add_dataset_in(fit, c, true);
    add_split(fit, c, fraction_text);
    fit->add_option("--mode", mode_text, "free_ols, half_slope, conservative or provable");
    fit->add_option("--out", c.output, "Model JSON")->required();
    fit->add_option("--precision", c.metric_digits, "Significant digits in rendered metrics")->check(CLI::Range(1u, 1000u));

    auto* eval = app.add_subcommand("eval", "MAE, MSE and R^2 of a model on a dataset split");
    add_common(eval, c);
    add_dataset_in(eval, c, true);
    add_split(eval, c, fraction_text);
    eval->add_option("--model", c.model, "Model JSON")->required();
    eval->add_option("--out", c.output, "Metrics JSON");
    eval->add_option("--precision", c.metric_digits, "Significant digits")->check(CLI::Range(1u, 1000u));

    auto* bnd = app.add_subcommand("bounds", "Compare learned and classical totient bounds");
    add_common(bnd, c);
    add_dataset_in(bnd, c, false);
    add_split(bnd, c, fraction_text);
    bnd->add_option("--model", c.model, "Slope-1/2 model JSON");
    bnd->add_option("--n", c.n_text, "Single modulus instead of a dataset");
    bnd->add_option("--p", c.p_text, "Factor of --n");
    bnd->add_option("--q", c.q_text, "Factor of --n");
    bnd->add_option("--out", c.output, "Bounds CSV");
    bnd->add_option("--bound-precision", c.bound_precision, "Working precision in bits")->check(CLI::Range(53u, 65536u));

    auto* atk = app.add_subcommand("attack", "Model-seeded Fermat search, or a window report over a dataset");
    add_common(atk, c);
    add_dataset_in(atk, c, false);
    add_split(atk, c, fraction_text);
    atk->add_option("--model", c.model, "Slope-1/2 model JSON");
    atk->add_option("--n", c.n_text, "Modulus to attack");
    atk->add_option("--p", c.p_text, "Known factor (harness only, for the window)");
    atk->add_option("--q", c.q_text, "Known factor (harness only, for the window)");
    atk->add_option("--row", c.row, "Attack this dataset row instead of reporting windows");
    atk->add_option("--budget", c.budget, "Maximum discriminant tests")->check(CLI::PositiveNumber);
    atk->add_flag("--baseline", c.baseline, "Start at ceil(2 sqrt n) instead of the model's prediction");
    atk->add_flag("--force", c.force, "Search even when the known window exceeds 2^40");
    atk->add_option("--out", c.output, "Outcome JSON, or output prefix for the window report");
    atk->add_option("--precision", c.metric_digits, "Significant digits")->check(CLI::Range(1u, 1000u));

    auto* plt = app.add_subcommand("plot", "Scatter and residual-histogram SVGs");
    add_common(plt, c);
    add_dataset_in(plt, c, true);
    add_split(plt, c, fraction_text);
    plt->add_option("--model", c.model, "Model JSON")->required();
    plt->add_option("--out", c.output, "Output directory")->required();
    plt->add_option("--bins", c.bins, "Histogram bins")->check(CLI::Range(1u, 100000u));

    auto* pipe = app.add_subcommand("pipeline", "generate -> fit -> eval -> bounds -> windows -> plots");
    add_common(pipe, c);
    pipe->add_option("--bits", c.bits, "Modulus size in bits (even, >= 8)")->required();
    pipe->add_option("--count", c.count, "Number of samples")->default_val(kDefaultCount);
    pipe->add_option("--seed", c.master_seed, "Master seed")->default_val(1);
    pipe->add_option("--out", c.output, "Output directory")->required();
    pipe->add_flag("--large", c.large, "Allow counts above the desk-scale limit");
    pipe->add_option("--train-fraction", fraction_text, "Training share, e.g. 4/5 or 0.8")->default_str("4/5");
    pipe->add_option("--mode", mode_text, "free_ols, half_slope, conservative or provable");
    pipe->add_option("--precision", c.metric_digits, "Significant digits")->check(CLI::Range(1u, 1000u));
    pipe->add_option("--bound-precision", c.bound_precision, "Working precision in bits")->check(CLI::Range(53u, 65536u));
    pipe->add_option("--bins", c.bins, "Histogram bins")->check(CLI::Range(1u, 100000u));
    pipe->add_option("--budget", c.budget, "Attack budget (recorded in the summary)")->check(CLI::PositiveNumber);

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = expand_config(std::move(args));
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }
    std::vector<const char*> expanded{argc > 0 ? argv[0] : "totient"};
    for (const auto& a : args) expanded.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(expanded.size()), expanded.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        const auto mode = parse_fit_mode(mode_text);
        if (!mode) throw UsageError("unknown --mode '" + mode_text + "'");
        c.mode = *mode;
        c.train_fraction = parse_fraction(fraction_text);
        c.subcommand = app.get_subcommands().front()->get_name();

        if (c.subcommand == "generate") return cmd_generate(c, out);
        if (c.subcommand == "fit") return cmd_fit(c, out);
        if (c.subcommand == "eval") return cmd_eval(c, out);
        if (c.subcommand == "bounds") return cmd_bounds(c, out);
        if (c.subcommand == "attack") return cmd_attack(c, out);
        if (c.subcommand == "plot") return cmd_plot(c, out);
        if (c.subcommand == "pipeline") return cmd_pipeline(c, out);
        throw UsageError("unknown subcommand");
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntime;
    }
}

}  // namespace totient::cli
