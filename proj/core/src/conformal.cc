// Copyright 2026 The qconformal Authors
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

#include "qconformal/conformal.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qconformal/errors.h"
#include "qconformal/number_format.h"

namespace qconformal {

std::string_view norm_name(NormKind norm) { return norm == NormKind::L2 ? "l2" : "linf"; }

std::optional<NormKind> parse_norm(std::string_view name) {
  if (name == "l2" || name == "L2") return NormKind::L2;
  if (name == "linf" || name == "LINF" || name == "Linf") return NormKind::LInf;
  return std::nullopt;
}

std::vector<double> residuals(const Matrix& Y, const Matrix& Yhat, NormKind norm) {
  if (Y.rows() != Yhat.rows() || Y.cols() != Yhat.cols()) {
    throw InputError("residuals: shape mismatch");
  }
  std::vector<double> r(Y.rows());
  for (std::size_t i = 0; i < Y.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < Y.cols(); ++j) {
      const double e = std::abs(Y(i, j) - Yhat(i, j));
      acc = norm == NormKind::LInf ? std::max(acc, e) : acc + e * e;
    }
    r[i] = norm == NormKind::LInf ? acc : std::sqrt(acc);
  }
  return r;
}

ConformalCalibration::ConformalCalibration(std::vector<double> scores, NormKind norm,
                                           std::size_t dim)
    : sorted_(std::move(scores)), norm_(norm), dim_(dim) {
  if (sorted_.empty()) throw InputError("calibration set is empty");
  for (double s : sorted_) {
    if (!std::isfinite(s) || s < 0.0) {
      throw InputError("calibration scores must be finite and non-negative");
    }
  }
  std::stable_sort(sorted_.begin(), sorted_.end());
}

double ConformalCalibration::threshold(double alpha) const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  const double n = static_cast<double>(sorted_.size());
  const auto k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * (n + 1.0)));
  if (k > sorted_.size()) return std::numeric_limits<double>::infinity();
  return sorted_[k - 1];
}

double coverage(std::span<const double> scores, double tau) {
  if (scores.empty()) throw InputError("coverage: empty test set");
  const auto inside = std::count_if(scores.begin(), scores.end(),
                                    [tau](double r) { return r <= tau; });
  return static_cast<double>(inside) / static_cast<double>(scores.size());
}

double coverage(const Matrix& Y, const Matrix& Yhat, double tau, NormKind norm) {
  return coverage(residuals(Y, Yhat, norm), tau);
}

SetSize set_size(double tau, std::size_t dim, NormKind norm) {
  if (dim < 1) throw InputError("set_size: dimension must be >= 1");
  if (!(tau >= 0.0)) throw InputError("set_size: tau must be >= 0");
  if (std::isinf(tau)) {
    const double inf = std::numeric_limits<double>::infinity();
    return {inf, inf};
  }
  const double d = static_cast<double>(dim);
  SetSize size;
  size.sum_size = 2.0 * d * tau;
  if (norm == NormKind::LInf) {
    size.volume = std::pow(2.0 * tau, d);
  } else {
    size.volume = std::pow(std::numbers::pi, d / 2.0) * std::pow(tau, d) /
                  std::tgamma(d / 2.0 + 1.0);
  }
  return size;
}

CoverageReport evaluate(const Forest& model, const SplitIndices& splits,
                        const Dataset& dataset, std::span<const double> alphas,
                        NormKind norm) {
  if (splits.cal.empty()) throw InputError("evaluate: calibration split is empty");
  if (splits.test.empty()) throw InputError("evaluate: test split is empty");

  const auto cal = gather(dataset, splits.cal);
  const auto test = gather(dataset, splits.test);
  const ConformalCalibration calibration(residuals(cal.Y, model.predict(cal.X), norm), norm,
                                         dataset.target_dim());
  const Matrix test_pred = model.predict(test.X);
  const auto test_scores = residuals(test.Y, test_pred, norm);
  const auto errors = mse(test.Y, test_pred);

  CoverageReport report;
  report.norm = norm;
  report.dim = dataset.target_dim();
  report.n_cal = splits.cal.size();
  report.n_test = splits.test.size();
  report.mse_overall = errors.overall;
  report.mse_per_output = errors.per_output;
  for (double alpha : alphas) {
    CoverageRow row;
    row.alpha = alpha;
    row.tau = calibration.threshold(alpha);
    row.coverage = coverage(test_scores, row.tau);
    const auto size = set_size(row.tau, report.dim, norm);
    row.sum_size = size.sum_size;
    row.volume = size.volume;
    report.rows.push_back(row);
  }
  return report;
}

std::vector<std::vector<std::string>> report_cells(const CoverageReport& report) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : report.rows) {
    cells.push_back({format_double(row.alpha), format_double(row.tau),
                     format_double(row.coverage), format_double(row.sum_size),
                     format_double(row.volume), std::string(norm_name(report.norm)),
                     std::to_string(report.dim), std::to_string(report.n_cal),
                     std::to_string(report.n_test), format_double(report.mse_overall)});
  }
  return cells;
}

std::string report_csv(const CoverageReport& report) {
  std::string out(kReportCsvHeader);
  out += '\n';
  for (const auto& line : report_cells(report)) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) out += ',';
      out += line[i];
    }
    out += '\n';
  }
  return out;
}

}  // namespace qconformal
