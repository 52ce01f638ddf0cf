// Copyright 2026 The olp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "olp/report_io.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "olp/errors.h"
#include "olp/format.h"

namespace olp {

void WriteRegretCsv(std::ostream& out, const std::vector<RegretRow>& rows) {
  out << "policy,T,trial,regret,seed\n";
  for (const RegretRow& row : rows) {
    out << row.policy << ',' << row.horizon << ',' << row.trial << ','
        << FormatDouble(row.regret) << ',' << row.seed << '\n';
  }
}

std::vector<RegretRow> ReadRegretCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) Fail(ErrorCode::kConfigError, "empty regret report");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "policy,T,trial,regret,seed") {
    Fail(ErrorCode::kConfigError, "regret report header must be policy,T,trial,regret,seed");
  }
  std::vector<RegretRow> rows;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) {
      Fail(ErrorCode::kConfigError, "report line " + std::to_string(lineno) + " needs 5 fields");
    }
    RegretRow row;
    try {
      row.policy = cells[0];
      row.horizon = std::stol(cells[1]);
      row.trial = std::stol(cells[2]);
      row.regret = std::stod(cells[3]);
      row.seed = std::stoull(cells[4]);
    } catch (const std::exception&) {
      Fail(ErrorCode::kConfigError, "report line " + std::to_string(lineno) + " is malformed");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string Fixed(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string RenderRegretSvg(const std::vector<CellSummary>& cells,
                            const std::map<std::string, ScalingFit>& fits) {
  std::vector<std::string> policies;
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const CellSummary& c : cells) {
    if (std::find(policies.begin(), policies.end(), c.policy) == policies.end()) {
      policies.push_back(c.policy);
    }
    if (!(c.mean > 0.0) || c.horizon < 1) continue;
    const double x = std::log10(static_cast<double>(c.horizon));
    const double y = std::log10(c.mean);
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  if (!std::isfinite(xmin)) {
    xmin = 0.0;
    xmax = 1.0;
    ymin = 0.0;
    ymax = 1.0;
  }
  xmin = std::floor(xmin * 10.0) / 10.0 - 0.05;
  xmax = std::ceil(xmax * 10.0) / 10.0 + 0.05;
  ymin = std::floor(ymin * 10.0) / 10.0 - 0.1;
  ymax = std::ceil(ymax * 10.0) / 10.0 + 0.1;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\""
      << ph << "\"/>\n</g>\n";
  // Ticks at 1-2-5 multiples of powers of ten.
  svg << "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int e = static_cast<int>(std::floor(xmin)); e <= static_cast<int>(std::ceil(xmax)); ++e) {
    for (double mult : {1.0, 2.0, 5.0}) {
      const double v = std::log10(mult) + e;
      if (v < xmin || v > xmax) continue;
      const double x = px(v);
      svg << "<line x1=\"" << Fixed(x) << "\" y1=\"" << Fixed(kTop + ph) << "\" x2=\""
          << Fixed(x) << "\" y2=\"" << Fixed(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
      svg << "<text x=\"" << Fixed(x) << "\" y=\"" << Fixed(kTop + ph + 18)
          << "\" text-anchor=\"middle\">" << FormatDouble(mult * std::pow(10.0, e))
          << "</text>\n";
    }
  }
  for (int e = static_cast<int>(std::floor(ymin)); e <= static_cast<int>(std::ceil(ymax)); ++e) {
    for (double mult : {1.0, 2.0, 5.0}) {
      const double v = std::log10(mult) + e;
      if (v < ymin || v > ymax) continue;
      const double y = py(v);
      svg << "<line x1=\"" << Fixed(kLeft - 5) << "\" y1=\"" << Fixed(y) << "\" x2=\""
          << Fixed(kLeft) << "\" y2=\"" << Fixed(y) << "\" stroke=\"black\"/>\n";
      svg << "<text x=\"" << Fixed(kLeft - 8) << "\" y=\"" << Fixed(y + 4)
          << "\" text-anchor=\"end\">" << FormatDouble(mult * std::pow(10.0, e))
          << "</text>\n";
    }
  }
  svg << "<text x=\"" << Fixed(kLeft + pw / 2) << "\" y=\"" << Fixed(kHeight - 10)
      << "\" text-anchor=\"middle\">T</text>\n";
  svg << "<text x=\"15\" y=\"" << Fixed(kTop + ph / 2) << "\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 15 " << Fixed(kTop + ph / 2) << ")\">mean regret</text>\n";
  svg << "</g>\n";

  for (size_t k = 0; k < policies.size(); ++k) {
    const std::string& name = policies[k];
    const char* color = kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg << "<g class=\"series\" data-policy=\"" << Escape(name) << "\">\n";
    for (const CellSummary& c : cells) {
      if (c.policy != name || !(c.mean > 0.0)) continue;
      svg << "<circle class=\"point\" cx=\""
          << Fixed(px(std::log10(static_cast<double>(c.horizon)))) << "\" cy=\""
          << Fixed(py(std::log10(c.mean))) << "\" r=\"4\" fill=\"" << color << "\"/>\n";
    }
    const auto fit = fits.find(name);
    if (fit != fits.end()) {
      // The fit lives in natural logs of mean / correction(T); draw it at the
      // uncorrected scale on the plotted T range.
      std::ostringstream pts;
      const int steps = 32;
      for (int s = 0; s <= steps; ++s) {
        const double x10 = xmin + (xmax - xmin) * s / steps;
        const double lt = x10 * std::log(10.0);
        double log_corr = 0.0;
        if (fit->second.correction == FitCorrection::kLog) log_corr = std::log(lt);
        if (fit->second.correction == FitCorrection::kLog2) log_corr = 2.0 * std::log(lt);
        const double y10 =
            (fit->second.intercept + fit->second.slope * lt + log_corr) / std::log(10.0);
        pts << (s ? " " : "") << Fixed(px(x10)) << ',' << Fixed(py(y10));
      }
      svg << "<polyline class=\"fit\" fill=\"none\" stroke=\"" << color
          << "\" stroke-dasharray=\"6 3\" points=\"" << pts.str() << "\"/>\n";
    }
    const double ly = kTop + 16.0 * (k + 1);
    svg << "<circle cx=\"" << Fixed(kWidth - kRight + 15) << "\" cy=\"" << Fixed(ly - 4)
        << "\" r=\"4\" fill=\"" << color << "\"/>\n";
    svg << "<text x=\"" << Fixed(kWidth - kRight + 25) << "\" y=\"" << Fixed(ly)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << Escape(name);
    if (fit != fits.end()) svg << " (slope " << Fixed(fit->second.slope) << ")";
    svg << "</text>\n</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace olp
