#include "polyconsensus/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace polyconsensus {

namespace {

double mean_of(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

// Unbiased (n-1) sample variance.
double sample_variance(std::span<const double> v, double mean) {
    if (v.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : v) {
        double d = x - mean;
        acc += d * d;
    }
    return acc / static_cast<double>(v.size() - 1);
}

// Continued fraction for the incomplete beta function (Lentz's method).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw Error("betacf: continued fraction did not converge");
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x < 0.0 || x > 1.0)
        throw InvalidInputError("regularized_incomplete_beta: x outside [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    double front = std::exp(lbeta + a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0))
        throw InvalidInputError("student_t_two_sided_p: df must be > 0");
    double x = df / (df + t * t);
    return regularized_incomplete_beta(0.5 * df, 0.5, x);
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b,
                         double alpha) {
    if (a.size() < 2 || b.size() < 2)
        throw InvalidInputError("welch_t_test: each sample needs at least 2 values");
    double ma = mean_of(a);
    double mb = mean_of(b);
    double va = sample_variance(a, ma);
    double vb = sample_variance(b, mb);
    if (va == 0.0 && vb == 0.0)
        throw InvalidInputError("welch_t_test: both sample variances are zero");

    double na = static_cast<double>(a.size());
    double nb = static_cast<double>(b.size());
    double sea = va / na;
    double seb = vb / nb;
    WelchResult res;
    res.alpha = alpha;
    res.t = (ma - mb) / std::sqrt(sea + seb);
    res.df = (sea + seb) * (sea + seb) /
             (sea * sea / (na - 1.0) + seb * seb / (nb - 1.0));
    res.p_two_sided = student_t_two_sided_p(res.t, res.df);
    res.significant = res.p_two_sided < alpha;
    return res;
}

CohortSummary summarize_cohort(std::span<const DBRecord> records, Phase phase) {
    if (records.empty())
        throw InvalidInputError("summarize_cohort: no records");

    std::map<std::string, std::vector<double>> by_image;
    std::vector<double> pooled;
    pooled.reserve(records.size());
    for (const DBRecord& r : records) {
        by_image[r.sample_id].push_back(r.d_b);
        pooled.push_back(r.d_b);
    }

    CohortSummary out;
    out.phase = phase;
    out.n_values = static_cast<int>(pooled.size());
    std::vector<double> image_means;
    image_means.reserve(by_image.size());
    for (const auto& [sample_id, values] : by_image) {
        PerImageStat stat;
        stat.sample_id = sample_id;
        stat.n_raters = static_cast<int>(values.size());
        stat.db_mean = mean_of(values);
        stat.db_std = std::sqrt(sample_variance(values, stat.db_mean));
        out.per_image.push_back(std::move(stat));
        image_means.push_back(out.per_image.back().db_mean);
    }
    out.grand_mean = mean_of(pooled);
    out.grand_std = std::sqrt(sample_variance(pooled, out.grand_mean));
    out.mean_of_image_means = mean_of(image_means);
    out.std_of_image_means =
        std::sqrt(sample_variance(image_means, out.mean_of_image_means));
    return out;
}

ComparisonReport compare_phases(std::span<const DBRecord> pre,
                                std::span<const DBRecord> post,
                                double alpha, bool per_image_means) {
    ComparisonReport report;
    report.per_image_means_mode = per_image_means;
    report.pre = summarize_cohort(pre, Phase::pre_qa);
    report.post = summarize_cohort(post, Phase::post_qa);

    std::vector<double> va, vb;
    if (per_image_means) {
        for (const PerImageStat& s : report.pre.per_image) va.push_back(s.db_mean);
        for (const PerImageStat& s : report.post.per_image) vb.push_back(s.db_mean);
    } else {
        for (const DBRecord& r : pre) va.push_back(r.d_b);
        for (const DBRecord& r : post) vb.push_back(r.d_b);
    }
    report.welch = welch_t_test(va, vb, alpha);

    std::map<std::string, double> pre_means, post_means;
    for (const PerImageStat& s : report.pre.per_image) pre_means[s.sample_id] = s.db_mean;
    for (const PerImageStat& s : report.post.per_image) post_means[s.sample_id] = s.db_mean;
    for (const auto& [sample_id, pm] : pre_means) {
        auto it = post_means.find(sample_id);
        if (it == post_means.end()) {
            report.warnings.push_back("sample '" + sample_id +
                                      "' has no post_qa values; omitted from deltas");
            continue;
        }
        report.per_image_deltas.push_back({sample_id, pm, it->second, it->second - pm});
    }
    for (const auto& [sample_id, pm] : post_means) {
        if (!pre_means.count(sample_id))
            report.warnings.push_back("sample '" + sample_id +
                                      "' has no pre_qa values; omitted from deltas");
    }

    if (report.post.grand_mean < report.pre.grand_mean)
        report.shift_direction = "decrease";
    else if (report.post.grand_mean > report.pre.grand_mean)
        report.shift_direction = "increase";
    else
        report.shift_direction = "none";
    return report;
}

} // namespace polyconsensus
