#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

namespace crowdlod::stats {

// ---------------------------------------------------------------------------
// Study data

// One forced-choice trial. chosen is the representation judged most similar
// to the mesh reference.
struct TrialRecord {
    std::string subject;
    int mode = 0;       // 0 = Image, 1 = Video
    int distance = 0;   // 0..4 (D0..D4)
    int lod = 0;        // 0..3 (L0..L3)
    int chosen = 0;     // 0..3 -> G, I, M, N
    int repetition = 0;
};

extern const char* const kModeLevels[2];             // Image, Video
extern const char* const kRepresentationLevels[4];   // G, I, M, N

// Trials from a CSV with header subject,mode,distance,lod,chosen,repetition.
// Duplicate (subject,mode,distance,lod,repetition) keys are rejected.
std::vector<TrialRecord> load_trials_csv(const std::string& path);

struct ProportionRow {
    std::string subject;
    int mode = 0;
    int distance = 0;
    int lod = 0;
    double proportion[4] = {0, 0, 0, 0}; // per representation, sums to 1
};

// Repetitions averaged per subject and condition. Rows sorted by
// (subject, mode, distance, lod); missing cells yield no row.
std::vector<ProportionRow> selection_proportions(const std::vector<TrialRecord>& trials);

// ---------------------------------------------------------------------------
// Factors, terms and design matrices

// A categorical column: per-observation level codes plus level labels.
struct Factor {
    std::string name;
    std::vector<std::string> levels;
    std::vector<int> codes;
};

// A model term is a set of factor names: {"Representation"} is a main
// effect, {"Representation","LoD"} an interaction.
using Term = std::vector<std::string>;

// Observations = response plus factor columns.
struct Dataset {
    Eigen::VectorXd response;
    std::vector<Factor> factors;

    const Factor& factor(const std::string& name) const;
    std::size_t rows() const { return std::size_t(response.size()); }
};

// Treatment-coded design matrix (intercept + dummy columns with the first
// level of each factor dropped; interaction columns are products).
struct DesignMatrix {
    Eigen::MatrixXd x;
    std::vector<std::string> column_labels;
    std::vector<std::pair<std::size_t, std::size_t>> term_spans; // [begin,end) per term
};

DesignMatrix build_design(const Dataset& data, const std::vector<Term>& terms);

// Parameter count a term contributes: product of (levels - 1).
std::size_t term_df(const Dataset& data, const Term& term);

// ---------------------------------------------------------------------------
// Linear models

struct OlsFit {
    Eigen::VectorXd coefficients;
    double rss = 0.0;
    std::size_t df_residual = 0;
};

// Householder-QR least squares. Throws NumericError on rank deficiency.
OlsFit fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

struct AnovaRow {
    std::string effect;
    std::size_t df = 0;
    double sum_squares = 0.0;
    double f_value = 0.0;
    double eta_squared = 0.0;
    double p_value = 0.0;
};

struct AnovaTable {
    std::vector<AnovaRow> rows;
    std::size_t df_residual = 0;
    double rss_full = 0.0;
    double ss_total = 0.0;
};

// Type II tests: each effect is measured against the model holding all
// effects that do not contain it. blocking terms (e.g. Subject) are always
// included and not tested. F uses the full-model residual mean square;
// eta^2 = SS_effect / total SS about the mean.
AnovaTable anova_type2(const Dataset& data, const std::vector<Term>& effects,
                       const std::vector<Term>& blocking = {});

// ---------------------------------------------------------------------------
// Binomial GLM (logit link)

struct GlmFit {
    Eigen::VectorXd coefficients;
    double deviance = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> deviance_trace; // per-iteration deviance, non-increasing
};

// IRLS to relative deviance change < tol (cap 50 iterations). Deviance is
// -2 log-likelihood for binary responses (saturated constant 0). Throws
// NumericError on separation (|coef| > 30) or a singular weighted system.
GlmFit fit_logit_glm(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double tol = 1e-8,
                     int max_iter = 50);

struct LrTest {
    double statistic = 0.0;
    std::size_t df = 0;
    double p_value = 0.0;
};

// Deviance difference of nested fits referred to chi-square(df_diff).
// Throws NumericError when the reduced model fits better than tolerance
// allows (signals non-nesting or non-convergence).
LrTest lr_test(const GlmFit& full, const GlmFit& reduced, std::size_t df_diff);

struct LrRow {
    std::string effect;
    double statistic = 0.0;
    std::size_t df = 0;
    double p_value = 0.0;
};

// Omnibus tests: for each effect the full model is compared against the
// hierarchically reduced model dropping the effect and every term
// containing it. df is the parameter-count difference.
std::vector<LrRow> glm_omnibus_tests(const Dataset& data, const std::vector<Term>& effects,
                                     const std::vector<Term>& blocking = {});

// ---------------------------------------------------------------------------
// Full analysis workflow

// Reads trials, writes proportions.csv, anova.csv/anova.txt and
// lr_tests.csv/lr_tests.txt under out_dir.
void analyze_trials(const std::string& trials_csv, const std::string& out_dir);

// OLS dataset: proportion rows expanded per representation with factors
// Representation, Distance, LoD, Mode, Subject.
Dataset proportions_dataset(const std::vector<ProportionRow>& rows);

// GLM dataset: each trial expanded to four binary rows (one per
// representation, response = chosen indicator), same factors.
Dataset trials_binary_dataset(const std::vector<TrialRecord>& trials);

// The full Representation x Distance x LoD x Mode factorial (15 terms).
std::vector<Term> full_factorial_terms();

// Effects tested in the trial-level GLM omnibus table.
std::vector<Term> glm_effect_terms();

} // namespace crowdlod::stats
