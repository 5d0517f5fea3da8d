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

#ifndef QCONFORMAL_CONFORMAL_H_
#define QCONFORMAL_CONFORMAL_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qconformal/dataset.h"
#include "qconformal/forest.h"
#include "qconformal/matrix.h"

namespace qconformal {

// Split conformal prediction for vector-valued targets. The non-conformity
// score of a row is the norm of its residual vector; the prediction set at
// level alpha is the norm ball of radius tau_alpha around the prediction.

enum class NormKind { L2, LInf };

std::string_view norm_name(NormKind norm);
std::optional<NormKind> parse_norm(std::string_view name);

// r_i = ||Y_i - Yhat_i||. Throws InputError on shape mismatch.
std::vector<double> residuals(const Matrix& Y, const Matrix& Yhat, NormKind norm);

class ConformalCalibration {
 public:
  // Sorts the scores. Throws InputError when empty, negative or non-finite.
  ConformalCalibration(std::vector<double> scores, NormKind norm, std::size_t dim);

  // k = ceil((1 - alpha)(n + 1)); returns the k-th smallest score, or
  // +infinity when k > n. Throws InputError unless 0 < alpha < 1.
  double threshold(double alpha) const;

  const std::vector<double>& sorted_residuals() const { return sorted_; }
  NormKind norm() const { return norm_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
  NormKind norm_;
  std::size_t dim_;
};

// Fraction of scores <= tau. Throws InputError when empty.
double coverage(std::span<const double> scores, double tau);
double coverage(const Matrix& Y, const Matrix& Yhat, double tau, NormKind norm);

struct SetSize {
  double sum_size = 0.0;
  double volume = 0.0;
};

// sum_size = 2 d tau for both norms. volume is (2 tau)^d for LINF cubes
// and pi^(d/2) tau^d / Gamma(d/2 + 1) for L2 balls. Infinite tau gives
// infinite sizes.
SetSize set_size(double tau, std::size_t dim, NormKind norm);

struct CoverageRow {
  double alpha = 0.0;
  double tau = 0.0;
  double coverage = 0.0;
  double sum_size = 0.0;
  double volume = 0.0;

  bool operator==(const CoverageRow&) const = default;
};

struct CoverageReport {
  std::vector<CoverageRow> rows;
  NormKind norm = NormKind::L2;
  std::size_t dim = 0;
  std::size_t n_cal = 0;
  std::size_t n_test = 0;
  double mse_overall = 0.0;
  std::vector<double> mse_per_output;

  bool operator==(const CoverageReport&) const = default;
};

// Calibrates on splits.cal, then for each alpha (in the given order,
// duplicates kept) reports tau, coverage on splits.test and the set sizes.
// MSE fields are computed on the test split.
CoverageReport evaluate(const Forest& model, const SplitIndices& splits,
                        const Dataset& dataset, std::span<const double> alphas,
                        NormKind norm);

inline constexpr std::string_view kReportCsvHeader =
    "alpha,tau,coverage,sum_size,volume,norm,d,n_cal,n_test,mse_overall";

// One line per row under kReportCsvHeader.
std::vector<std::vector<std::string>> report_cells(const CoverageReport& report);
std::string report_csv(const CoverageReport& report);

}  // namespace qconformal

#endif  // QCONFORMAL_CONFORMAL_H_
