#include "core/stats.hpp"

#include "core/common.hpp"
#include "core/dist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace crowdlod::stats {

const char* const kModeLevels[2] = {"Image", "Video"};
const char* const kRepresentationLevels[4] = {"G", "I", "M", "N"};

// ---------------------------------------------------------------------------
// Trial ingestion

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) {
        // trim
        const auto begin = field.find_first_not_of(" \t\r");
        const auto end = field.find_last_not_of(" \t\r");
        fields.push_back(begin == std::string::npos ? std::string()
                                                    : field.substr(begin, end - begin + 1));
    }
    return fields;
}

int parse_mode(const std::string& s) {
    if (s == "Image" || s == "image") return 0;
    if (s == "Video" || s == "video") return 1;
    throw IoError("bad mode: " + s);
}

int parse_coded(const std::string& s, char prefix, int max, const char* what) {
    if (s.size() == 2 && s[0] == prefix && s[1] >= '0' && s[1] <= char('0' + max))
        return s[1] - '0';
    throw IoError(std::string("bad ") + what + ": " + s);
}

int parse_chosen(const std::string& s) {
    for (int i = 0; i < 4; ++i)
        if (s == kRepresentationLevels[i]) return i;
    throw IoError("bad chosen representation (want G/I/M/N): " + s);
}

} // namespace

std::vector<TrialRecord> load_trials_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trials file: " + path);
    std::vector<TrialRecord> trials;
    std::set<std::tuple<std::string, int, int, int, int>> seen;
    std::string line;
    int line_no = 0;
    bool header_skipped = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (!header_skipped) {
            header_skipped = true;
            if (line.find("subject") != std::string::npos) continue;
        }
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 6)
            throw IoError(path + ":" + std::to_string(line_no) +
                          ": expected subject,mode,distance,lod,chosen,repetition");
        TrialRecord t;
        t.subject = f[0];
        t.mode = parse_mode(f[1]);
        t.distance = parse_coded(f[2], 'D', 4, "distance");
        t.lod = parse_coded(f[3], 'L', 3, "lod");
        t.chosen = parse_chosen(f[4]);
        try {
            t.repetition = std::stoi(f[5]);
        } catch (const std::exception&) {
            throw IoError(path + ":" + std::to_string(line_no) + ": bad repetition index");
        }
        if (!seen.insert({t.subject, t.mode, t.distance, t.lod, t.repetition}).second)
            throw IoError(path + ":" + std::to_string(line_no) +
                          ": duplicate (subject,mode,distance,lod,repetition) key");
        trials.push_back(std::move(t));
    }
    if (trials.empty()) throw IoError("no trials in " + path);
    return trials;
}

std::vector<ProportionRow> selection_proportions(const std::vector<TrialRecord>& trials) {
    if (trials.empty()) throw std::invalid_argument("selection_proportions: no trials");
    std::map<std::tuple<std::string, int, int, int>, std::array<int, 5>> cells; // counts + total
    for (const TrialRecord& t : trials) {
        auto& cell = cells[{t.subject, t.mode, t.distance, t.lod}];
        ++cell[std::size_t(t.chosen)];
        ++cell[4];
    }
    std::vector<ProportionRow> rows;
    rows.reserve(cells.size());
    for (const auto& [key, counts] : cells) {
        ProportionRow row;
        row.subject = std::get<0>(key);
        row.mode = std::get<1>(key);
        row.distance = std::get<2>(key);
        row.lod = std::get<3>(key);
        for (int r = 0; r < 4; ++r)
            row.proportion[r] = double(counts[std::size_t(r)]) / double(counts[4]);
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Design matrices

const Factor& Dataset::factor(const std::string& name) const {
    for (const Factor& f : factors)
        if (f.name == name) return f;
    throw std::invalid_argument("dataset: unknown factor " + name);
}

std::size_t term_df(const Dataset& data, const Term& term) {
    std::size_t df = 1;
    for (const std::string& name : term) df *= data.factor(name).levels.size() - 1;
    return df;
}

DesignMatrix build_design(const Dataset& data, const std::vector<Term>& terms) {
    const std::size_t n = data.rows();
    std::size_t cols = 1;
    for (const Term& t : terms) cols += term_df(data, t);

    DesignMatrix design;
    design.x.resize(Eigen::Index(n), Eigen::Index(cols));
    design.x.col(0).setOnes();
    design.column_labels.push_back("(Intercept)");

    std::size_t col = 1;
    for (const Term& term : terms) {
        const std::size_t begin = col;
        if (term_df(data, term) == 0) { // a single-level factor contributes nothing
            design.term_spans.emplace_back(begin, col);
            continue;
        }
        std::vector<const Factor*> fs;
        fs.reserve(term.size());
        for (const std::string& name : term) fs.push_back(&data.factor(name));

        // iterate over all combinations of non-reference levels
        std::vector<std::size_t> level(term.size(), 1);
        while (true) {
            std::string label;
            for (std::size_t k = 0; k < fs.size(); ++k) {
                if (k) label += ":";
                label += fs[k]->name + "[" + fs[k]->levels[level[k]] + "]";
            }
            design.column_labels.push_back(label);
            for (std::size_t row = 0; row < n; ++row) {
                double v = 1.0;
                for (std::size_t k = 0; k < fs.size(); ++k)
                    if (fs[k]->codes[row] != int(level[k])) {
                        v = 0.0;
                        break;
                    }
                design.x(Eigen::Index(row), Eigen::Index(col)) = v;
            }
            ++col;

            std::size_t k = fs.size();
            while (k > 0) {
                --k;
                if (++level[k] < fs[k]->levels.size()) break;
                level[k] = 1;
                if (k == 0) goto term_done;
            }
            if (fs.empty()) break;
        }
    term_done:
        design.term_spans.emplace_back(begin, col);
    }
    return design;
}

// ---------------------------------------------------------------------------
// OLS and ANOVA

OlsFit fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    if (x.rows() != y.size()) throw std::invalid_argument("fit_ols: row count mismatch");
    if (x.rows() < x.cols()) throw NumericError("fit_ols: more columns than observations");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() < x.cols())
        throw NumericError("fit_ols: rank-deficient design (rank " + std::to_string(qr.rank()) +
                           " of " + std::to_string(x.cols()) + ")");
    OlsFit fit;
    fit.coefficients = qr.solve(y);
    fit.rss = (y - x * fit.coefficients).squaredNorm();
    fit.df_residual = std::size_t(x.rows() - x.cols());
    return fit;
}

namespace {

bool term_contains(const Term& outer, const Term& inner) {
    for (const std::string& name : inner)
        if (std::find(outer.begin(), outer.end(), name) == outer.end()) return false;
    return true;
}

} // namespace

AnovaTable anova_type2(const Dataset& data, const std::vector<Term>& effects,
                       const std::vector<Term>& blocking) {
    std::vector<Term> full_terms = blocking;
    full_terms.insert(full_terms.end(), effects.begin(), effects.end());

    const DesignMatrix full_design = build_design(data, full_terms);
    const OlsFit full_fit = fit_ols(full_design.x, data.response);

    AnovaTable table;
    table.df_residual = full_fit.df_residual;
    table.rss_full = full_fit.rss;
    const double mean = data.response.mean();
    table.ss_total = (data.response.array() - mean).square().sum();
    const double mse = full_fit.rss / double(full_fit.df_residual);

    for (const Term& effect : effects) {
        std::vector<Term> others = blocking;
        for (const Term& t : effects)
            if (!term_contains(t, effect)) others.push_back(t);
        std::vector<Term> with_effect = others;
        with_effect.push_back(effect);

        const OlsFit without = fit_ols(build_design(data, others).x, data.response);
        const OlsFit with = fit_ols(build_design(data, with_effect).x, data.response);

        AnovaRow row;
        row.effect = [&] {
            std::string s;
            for (std::size_t i = 0; i < effect.size(); ++i) {
                if (i) s += " x ";
                s += effect[i];
            }
            return s;
        }();
        row.df = term_df(data, effect);
        row.sum_squares = std::max(0.0, without.rss - with.rss);
        if (row.df == 0) { // single-level factor contributes nothing testable
            row.f_value = 0.0;
            row.eta_squared = 0.0;
            row.p_value = 1.0;
        } else {
            row.f_value = (row.sum_squares / double(row.df)) / mse;
            row.eta_squared = table.ss_total > 0 ? row.sum_squares / table.ss_total : 0.0;
            row.p_value = f_dist_sf(row.f_value, double(row.df), double(table.df_residual));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

// ---------------------------------------------------------------------------
// Binomial GLM

namespace {

double binary_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
    double dev = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double m = std::clamp(mu[i], 1e-12, 1.0 - 1e-12);
        dev += y[i] * std::log(m) + (1.0 - y[i]) * std::log1p(-m);
    }
    return -2.0 * dev;
}

} // namespace

GlmFit fit_logit_glm(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double tol,
                     int max_iter) {
    if (x.rows() != y.size()) throw std::invalid_argument("fit_logit_glm: row count mismatch");
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (y[i] < 0.0 || y[i] > 1.0)
            throw std::invalid_argument("fit_logit_glm: responses must lie in [0,1]");

    GlmFit fit;
    fit.coefficients = Eigen::VectorXd::Zero(x.cols());
    Eigen::VectorXd eta = Eigen::VectorXd::Zero(x.rows());
    Eigen::VectorXd mu = Eigen::VectorXd::Constant(x.rows(), 0.5);
    double dev = binary_deviance(y, mu);

    for (int iter = 1; iter <= max_iter; ++iter) {
        Eigen::VectorXd w(x.rows());
        Eigen::VectorXd z(x.rows());
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            const double m = std::clamp(mu[i], 1e-10, 1.0 - 1e-10);
            const double wi = m * (1.0 - m);
            w[i] = std::sqrt(wi);
            z[i] = eta[i] + (y[i] - m) / wi;
        }
        const Eigen::MatrixXd xw = w.asDiagonal() * x;
        const Eigen::VectorXd zw = w.asDiagonal() * z;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xw);
        qr.setThreshold(1e-10);
        if (qr.rank() < x.cols())
            throw NumericError("fit_logit_glm: singular weighted system");
        fit.coefficients = qr.solve(zw);
        fit.iterations = iter;

        if (fit.coefficients.cwiseAbs().maxCoeff() > 30.0)
            throw NumericError("fit_logit_glm: separation detected (coefficient beyond 30)");

        eta = x * fit.coefficients;
        for (Eigen::Index i = 0; i < eta.size(); ++i) mu[i] = 1.0 / (1.0 + std::exp(-eta[i]));
        const double new_dev = binary_deviance(y, mu);
        const double rel = std::abs(new_dev - dev) / (std::abs(new_dev) + 0.1);
        dev = new_dev;
        fit.deviance_trace.push_back(dev);
        if (rel < tol) {
            fit.converged = true;
            break;
        }
    }
    fit.deviance = dev;
    if (!fit.converged)
        throw NumericError("fit_logit_glm: no convergence in " + std::to_string(max_iter) +
                           " iterations");
    return fit;
}

LrTest lr_test(const GlmFit& full, const GlmFit& reduced, std::size_t df_diff) {
    double lr = reduced.deviance - full.deviance;
    if (lr < -1e-6)
        throw NumericError("lr_test: reduced model fits better than full (non-nested models?)");
    lr = std::max(0.0, lr);
    LrTest t;
    t.statistic = lr;
    t.df = df_diff;
    t.p_value = df_diff == 0 ? 1.0 : chi_square_sf(lr, double(df_diff));
    if (lr == 0.0) t.p_value = 1.0;
    return t;
}

std::vector<LrRow> glm_omnibus_tests(const Dataset& data, const std::vector<Term>& effects,
                                     const std::vector<Term>& blocking) {
    std::vector<Term> full_terms = blocking;
    full_terms.insert(full_terms.end(), effects.begin(), effects.end());
    const DesignMatrix full_design = build_design(data, full_terms);
    const GlmFit full_fit = fit_logit_glm(full_design.x, data.response);

    std::vector<LrRow> rows;
    for (const Term& effect : effects) {
        std::vector<Term> reduced_terms = blocking;
        for (const Term& t : effects)
            if (!term_contains(t, effect)) reduced_terms.push_back(t);

        const DesignMatrix reduced_design = build_design(data, reduced_terms);
        const GlmFit reduced_fit = fit_logit_glm(reduced_design.x, data.response);
        const std::size_t df_diff =
            std::size_t(full_design.x.cols() - reduced_design.x.cols());
        const LrTest t = lr_test(full_fit, reduced_fit, df_diff);

        LrRow row;
        row.effect = [&] {
            std::string s;
            for (std::size_t i = 0; i < effect.size(); ++i) {
                if (i) s += " x ";
                s += effect[i];
            }
            return s;
        }();
        row.statistic = t.statistic;
        row.df = t.df;
        row.p_value = t.p_value;
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Dataset builders

namespace {

Factor make_factor(std::string name, std::vector<std::string> levels, std::vector<int> codes) {
    Factor f;
    f.name = std::move(name);
    f.levels = std::move(levels);
    f.codes = std::move(codes);
    return f;
}

std::vector<std::string> coded_levels(char prefix, int count) {
    std::vector<std::string> out;
    out.reserve(std::size_t(count));
    for (int i = 0; i < count; ++i) out.push_back(std::string(1, prefix) + std::to_string(i));
    return out;
}

std::vector<std::string> sorted_subjects(const std::vector<std::string>& raw) {
    std::vector<std::string> subjects = raw;
    std::sort(subjects.begin(), subjects.end());
    subjects.erase(std::unique(subjects.begin(), subjects.end()), subjects.end());
    return subjects;
}

int subject_code(const std::vector<std::string>& subjects, const std::string& id) {
    return int(std::lower_bound(subjects.begin(), subjects.end(), id) - subjects.begin());
}

} // namespace

Dataset proportions_dataset(const std::vector<ProportionRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("proportions_dataset: no rows");
    std::vector<std::string> ids;
    ids.reserve(rows.size());
    for (const ProportionRow& r : rows) ids.push_back(r.subject);
    const std::vector<std::string> subjects = sorted_subjects(ids);

    const std::size_t n = rows.size() * 4;
    Dataset data;
    data.response.resize(Eigen::Index(n));
    std::vector<int> rep(n), dist(n), lod(n), mode(n), subj(n);
    std::size_t i = 0;
    for (const ProportionRow& row : rows) {
        for (int r = 0; r < 4; ++r, ++i) {
            data.response[Eigen::Index(i)] = row.proportion[r];
            rep[i] = r;
            dist[i] = row.distance;
            lod[i] = row.lod;
            mode[i] = row.mode;
            subj[i] = subject_code(subjects, row.subject);
        }
    }
    data.factors.push_back(make_factor(
        "Representation", {kRepresentationLevels[0], kRepresentationLevels[1],
                           kRepresentationLevels[2], kRepresentationLevels[3]},
        std::move(rep)));
    data.factors.push_back(make_factor("Distance", coded_levels('D', 5), std::move(dist)));
    data.factors.push_back(make_factor("LoD", coded_levels('L', 4), std::move(lod)));
    data.factors.push_back(
        make_factor("Mode", {kModeLevels[0], kModeLevels[1]}, std::move(mode)));
    data.factors.push_back(make_factor("Subject", subjects, std::move(subj)));
    return data;
}

Dataset trials_binary_dataset(const std::vector<TrialRecord>& trials) {
    if (trials.empty()) throw std::invalid_argument("trials_binary_dataset: no trials");
    std::vector<std::string> ids;
    ids.reserve(trials.size());
    for (const TrialRecord& t : trials) ids.push_back(t.subject);
    const std::vector<std::string> subjects = sorted_subjects(ids);

    const std::size_t n = trials.size() * 4;
    Dataset data;
    data.response.resize(Eigen::Index(n));
    std::vector<int> rep(n), dist(n), lod(n), mode(n), subj(n);
    std::size_t i = 0;
    for (const TrialRecord& t : trials) {
        for (int r = 0; r < 4; ++r, ++i) {
            data.response[Eigen::Index(i)] = (t.chosen == r) ? 1.0 : 0.0;
            rep[i] = r;
            dist[i] = t.distance;
            lod[i] = t.lod;
            mode[i] = t.mode;
            subj[i] = subject_code(subjects, t.subject);
        }
    }
    data.factors.push_back(make_factor(
        "Representation", {kRepresentationLevels[0], kRepresentationLevels[1],
                           kRepresentationLevels[2], kRepresentationLevels[3]},
        std::move(rep)));
    data.factors.push_back(make_factor("Distance", coded_levels('D', 5), std::move(dist)));
    data.factors.push_back(make_factor("LoD", coded_levels('L', 4), std::move(lod)));
    data.factors.push_back(
        make_factor("Mode", {kModeLevels[0], kModeLevels[1]}, std::move(mode)));
    data.factors.push_back(make_factor("Subject", subjects, std::move(subj)));
    return data;
}

std::vector<Term> full_factorial_terms() {
    const std::vector<std::string> f = {"Representation", "Distance", "LoD", "Mode"};
    std::vector<Term> terms;
    for (std::size_t mask = 1; mask < 16; ++mask) {
        Term t;
        for (std::size_t k = 0; k < 4; ++k)
            if (mask & (1u << k)) t.push_back(f[k]);
        terms.push_back(std::move(t));
    }
    // order by interaction size, then factor order
    std::stable_sort(terms.begin(), terms.end(),
                     [](const Term& a, const Term& b) { return a.size() < b.size(); });
    return terms;
}

std::vector<Term> glm_effect_terms() {
    return {
        {"Representation"},
        {"Distance"},
        {"LoD"},
        {"Mode"},
        {"Representation", "Distance"},
        {"Representation", "LoD"},
        {"Representation", "Mode"},
        {"LoD", "Distance"},
        {"Representation", "LoD", "Distance"},
    };
}

// ---------------------------------------------------------------------------
// Workflow

namespace {

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

std::string fmt_p(double p) {
    if (p < 0.001) return "<0.001";
    return fmt(p, 3);
}

} // namespace

void analyze_trials(const std::string& trials_csv, const std::string& out_dir) {
    const std::vector<TrialRecord> trials = load_trials_csv(trials_csv);
    std::filesystem::create_directories(out_dir);
    const auto out_path = [&](const char* name) {
        return (std::filesystem::path(out_dir) / name).string();
    };

    // selection proportions
    const std::vector<ProportionRow> props = selection_proportions(trials);
    {
        std::ofstream out(out_path("proportions.csv"));
        if (!out) throw IoError("cannot write proportions.csv");
        out << "subject,mode,distance,lod,G,I,M,N\n";
        for (const ProportionRow& r : props) {
            out << r.subject << ',' << kModeLevels[r.mode] << ",D" << r.distance << ",L" << r.lod;
            for (int k = 0; k < 4; ++k) out << ',' << fmt(r.proportion[k], 6);
            out << '\n';
        }
    }

    // OLS + Type II ANOVA on proportions
    const Dataset ols_data = proportions_dataset(props);
    const AnovaTable anova = anova_type2(ols_data, full_factorial_terms(), {{"Subject"}});
    {
        std::ofstream csv(out_path("anova.csv"));
        if (!csv) throw IoError("cannot write anova.csv");
        csv << "effect,df,sum_squares,F,eta_squared,p\n";
        for (const AnovaRow& r : anova.rows)
            csv << r.effect << ',' << r.df << ',' << fmt(r.sum_squares, 6) << ','
                << fmt(r.f_value, 4) << ',' << fmt(r.eta_squared, 4) << ',' << fmt(r.p_value, 6)
                << '\n';

        std::ofstream txt(out_path("anova.txt"));
        txt << "Type II ANOVA (OLS with subject fixed effects)\n";
        txt << "denominator df: " << anova.df_residual << "\n\n";
        char line[160];
        std::snprintf(line, sizeof line, "%-44s %5s %10s %8s %8s\n", "effect", "df", "F", "eta2",
                      "p");
        txt << line;
        for (const AnovaRow& r : anova.rows) {
            std::snprintf(line, sizeof line, "%-44s %5zu %10s %8s %8s\n", r.effect.c_str(), r.df,
                          fmt(r.f_value, 2).c_str(), fmt(r.eta_squared, 3).c_str(),
                          fmt_p(r.p_value).c_str());
            txt << line;
        }
    }

    // trial-level GLM omnibus table
    const Dataset glm_data = trials_binary_dataset(trials);
    const std::vector<LrRow> lr = glm_omnibus_tests(glm_data, glm_effect_terms(), {{"Subject"}});
    {
        std::ofstream csv(out_path("lr_tests.csv"));
        if (!csv) throw IoError("cannot write lr_tests.csv");
        csv << "effect,LR,df,p\n";
        for (const LrRow& r : lr)
            csv << r.effect << ',' << fmt(r.statistic, 4) << ',' << r.df << ','
                << fmt(r.p_value, 6) << '\n';

        std::ofstream txt(out_path("lr_tests.txt"));
        txt << "Omnibus likelihood-ratio tests (trial-level binomial GLM, logit link,\n"
               "subject fixed effects; reduced models drop the effect and every term\n"
               "containing it; df is the parameter-count difference)\n\n";
        char line[160];
        std::snprintf(line, sizeof line, "%-44s %10s %5s %8s\n", "effect", "LR", "df", "p");
        txt << line;
        for (const LrRow& r : lr) {
            std::snprintf(line, sizeof line, "%-44s %10s %5zu %8s\n", r.effect.c_str(),
                          fmt(r.statistic, 2).c_str(), r.df, fmt_p(r.p_value).c_str());
            txt << line;
        }
    }
}

} // namespace crowdlod::stats
