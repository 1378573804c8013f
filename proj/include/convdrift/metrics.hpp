#pragma once

#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "convdrift/errors.hpp"
#include "convdrift/types.hpp"

namespace convdrift {

/// Confusion counts with Fake as the positive class.
struct ConfusionMatrix {
    int tp = 0;
    int fp = 0;
    int tn = 0;
    int fn = 0;

    int total() const { return tp + fp + tn + fn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

inline ConfusionMatrix confusion(const std::vector<Label>& preds,
                                 const std::vector<Label>& golds) {
    if (preds.size() != golds.size()) throw LengthMismatch("confusion: preds vs golds");
    if (preds.empty()) throw EmptyInput("confusion: no predictions");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] == Label::Fake) {
            (golds[i] == Label::Fake ? cm.tp : cm.fp) += 1;
        } else {
            (golds[i] == Label::Fake ? cm.fn : cm.tn) += 1;
        }
    }
    return cm;
}

enum class Averaging { BinaryFakePositive, Macro };

inline const char* to_string(Averaging a) {
    return a == Averaging::Macro ? "macro" : "binary_fake_positive";
}

struct EvalReport {
    std::string model_name;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    Averaging averaging = Averaging::BinaryFakePositive;
    std::chrono::microseconds wall_time{0};
    int n = 0;
};

namespace detail {

inline double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

inline double f1_of(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace detail

/// accuracy = (tp+tn)/total; binary precision/recall/f1 take Fake as the
/// positive class (0 when the denominator is 0); macro averages the
/// per-class values with equal weight.
inline EvalReport metrics(const ConfusionMatrix& cm,
                          Averaging averaging = Averaging::BinaryFakePositive) {
    if (cm.total() <= 0) throw EmptyInput("metrics: empty confusion matrix");
    EvalReport r;
    r.averaging = averaging;
    r.n = cm.total();
    r.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());

    const double p_fake = detail::safe_ratio(cm.tp, cm.tp + cm.fp);
    const double r_fake = detail::safe_ratio(cm.tp, cm.tp + cm.fn);
    const double f_fake = detail::f1_of(p_fake, r_fake);
    if (averaging == Averaging::BinaryFakePositive) {
        r.precision = p_fake;
        r.recall = r_fake;
        r.f1 = f_fake;
    } else {
        const double p_real = detail::safe_ratio(cm.tn, cm.tn + cm.fn);
        const double r_real = detail::safe_ratio(cm.tn, cm.tn + cm.fp);
        const double f_real = detail::f1_of(p_real, r_real);
        r.precision = 0.5 * (p_fake + p_real);
        r.recall = 0.5 * (r_fake + r_real);
        r.f1 = 0.5 * (f_fake + f_real);
    }
    return r;
}

/// Monotonic wall-clock duration around a callable, plus its result.
template <typename F>
auto time_run(F&& task) {
    struct Timed {
        std::chrono::microseconds duration;
        decltype(task()) result;
    };
    const auto start = std::chrono::steady_clock::now();
    auto result = task();
    return Timed{std::chrono::duration_cast<std::chrono::microseconds>(
                     std::chrono::steady_clock::now() - start),
                 std::move(result)};
}

enum class ReportFormat { Csv, Json };

inline ReportFormat report_format_from_string(const std::string& s) {
    if (s == "csv") return ReportFormat::Csv;
    if (s == "json") return ReportFormat::Json;
    throw InvalidParams("unknown report format: '" + s + "'");
}

inline constexpr const char* kReportCsvHeader =
    "model,accuracy,precision,recall,f1,wall_time_s,n";

namespace detail {

inline std::string format_double(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
}

}  // namespace detail

inline std::string render_report_csv(const std::vector<EvalReport>& reports) {
    std::string out = std::string(kReportCsvHeader) + "\n";
    for (const auto& r : reports) {
        out += r.model_name + "," + detail::format_double(r.accuracy) + "," +
               detail::format_double(r.precision) + "," + detail::format_double(r.recall) +
               "," + detail::format_double(r.f1) + "," +
               detail::format_double(static_cast<double>(r.wall_time.count()) / 1e6) + "," +
               std::to_string(r.n) + "\n";
    }
    return out;
}

inline nlohmann::json report_to_json(const EvalReport& r) {
    return {{"model", r.model_name},
            {"accuracy", r.accuracy},
            {"precision", r.precision},
            {"recall", r.recall},
            {"f1", r.f1},
            {"averaging", to_string(r.averaging)},
            {"wall_time_s", static_cast<double>(r.wall_time.count()) / 1e6},
            {"n", r.n}};
}

inline std::string render_report_json(const std::vector<EvalReport>& reports) {
    nlohmann::json root;
    root["reports"] = nlohmann::json::array();
    for (const auto& r : reports) root["reports"].push_back(report_to_json(r));
    return root.dump(2) + "\n";
}

/// Stable column order, deterministic output for identical inputs.
inline void emit_report(const std::vector<EvalReport>& reports, const std::string& path,
                        ReportFormat format) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report file: " + path);
    out << (format == ReportFormat::Csv ? render_report_csv(reports)
                                        : render_report_json(reports));
    if (!out) throw IoError("failed while writing report file: " + path);
}

}  // namespace convdrift
