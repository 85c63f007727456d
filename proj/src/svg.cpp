/*
 * Copyright 2026 The flowshap Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "flowshap/explain_viz.hpp"
#include "flowshap/io.hpp"
#include "flowshap/rng.hpp"

namespace flowshap::viz {

namespace {

constexpr double kWidth = 760.0;
constexpr double kLabelWidth = 230.0;
constexpr double kRight = 30.0;
constexpr double kRowHeight = 24.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 40.0;

constexpr const char* kRed = "#ff0d57";
constexpr const char* kBlue = "#1e88e5";

std::string num(double v) {
  if (std::abs(v) < 5e-5) v = 0.0;  // no "-0.00"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label_num(double v) {
  if (std::abs(v) < 5e-5) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
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

// Blue (0) to red (1) through purple.
std::string gradient_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(0x1e + t * (0xff - 0x1e)));
  const int g = static_cast<int>(std::lround(0x88 + t * (0x0d - 0x88)));
  const int b = static_cast<int>(std::lround(0xe5 + t * (0x57 - 0xe5)));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

struct Scale {
  double lo, hi, out_lo, out_hi;

  Scale(double lo_, double hi_, double a, double b) : lo(lo_), hi(hi_), out_lo(a), out_hi(b) {
    if (!(hi > lo)) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  double operator()(double v) const { return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo); }
};

class Doc {
 public:
  Doc(double width, double height, std::string_view title) {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
         << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
         << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n"
         << "<text x=\"" << num(width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
         << "</text>\n";
  }

  std::ostringstream& raw() { return out_; }

  void line(double x1, double y1, double x2, double y2, std::string_view stroke, std::string_view extra = "") {
    out_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
         << "\" stroke=\"" << stroke << "\"" << extra << "/>\n";
  }

  void text(double x, double y, std::string_view content, std::string_view anchor = "start") {
    out_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" text-anchor=\"" << anchor << "\">"
         << escape(content) << "</text>\n";
  }

  void axis(const Scale& s, double y, std::string_view label) {
    line(s.out_lo, y, s.out_hi, y, "#333333");
    for (int i = 0; i <= 4; ++i) {
      const double v = s.lo + (s.hi - s.lo) * i / 4.0;
      const double x = s(v);
      line(x, y, x, y + 4, "#333333");
      text(x, y + 16, label_num(v), "middle");
    }
    text((s.out_lo + s.out_hi) / 2, y + 32, label, "middle");
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  std::ostringstream out_;
};

double jitter(std::size_t sample) {
  const double u = static_cast<double>(splitmix64(sample) >> 11) * 0x1.0p-53;
  return (u - 0.5) * (kRowHeight * 0.6);
}

}  // namespace

std::string bar_svg(const featsel::FeatureRanking& ranking) {
  const double height = kTop + kRowHeight * static_cast<double>(ranking.entries.size()) + kBottom + 10;
  Doc doc(kWidth, height, "mean(|SHAP value|)");
  double hi = 0.0;
  for (const auto& e : ranking.entries) hi = std::max(hi, e.score);
  const Scale x(0.0, hi > 0.0 ? hi : 1.0, kLabelWidth, kWidth - kRight);
  for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
    const auto& e = ranking.entries[i];
    const double y = kTop + kRowHeight * static_cast<double>(i);
    doc.raw() << "<g class=\"row\" data-feature=\"" << escape(e.name) << "\">\n";
    doc.text(kLabelWidth - 8, y + kRowHeight * 0.65, e.name, "end");
    doc.raw() << "<rect x=\"" << num(x.out_lo) << "\" y=\"" << num(y + 3) << "\" width=\""
              << num(x(e.score) - x.out_lo) << "\" height=\"" << num(kRowHeight - 6) << "\" fill=\"" << kRed
              << "\"/>\n</g>\n";
  }
  doc.axis(x, height - kBottom, "mean(|SHAP value|)");
  return doc.finish();
}

std::string summary_svg(const SummaryData& data) {
  const std::size_t rows = data.ranking.entries.size();
  const double height = kTop + kRowHeight * static_cast<double>(rows) + kBottom + 10;
  Doc doc(kWidth, height, "SHAP summary");
  double lo = 0.0, hi = 0.0;
  for (const auto& p : data.points) {
    lo = std::min(lo, p.shap_value);
    hi = std::max(hi, p.shap_value);
  }
  const Scale x(lo, hi, kLabelWidth, kWidth - kRight - 20);
  const double plot_bottom = kTop + kRowHeight * static_cast<double>(rows);
  doc.line(x(0.0), kTop, x(0.0), plot_bottom, "#999999");
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string& name = data.ranking.entries[r].name;
    const double center = kTop + kRowHeight * (static_cast<double>(r) + 0.5);
    doc.raw() << "<g class=\"row\" data-feature=\"" << escape(name) << "\">\n";
    doc.text(kLabelWidth - 8, center + 4, name, "end");
    for (const auto& p : data.points) {
      if (p.feature != name) continue;
      doc.raw() << "<circle cx=\"" << num(x(p.shap_value)) << "\" cy=\"" << num(center + jitter(p.sample))
                << "\" r=\"3\" fill=\"" << gradient_color(p.normalized_value) << "\"/>\n";
    }
    doc.raw() << "</g>\n";
  }
  // Color legend: low (blue) to high (red) feature value.
  const double lx = kWidth - kRight - 8;
  for (int i = 0; i < 10; ++i) {
    doc.raw() << "<rect x=\"" << num(lx) << "\" y=\"" << num(kTop + (9 - i) * 8.0) << "\" width=\"8\" height=\"8\" fill=\""
              << gradient_color(i / 9.0) << "\"/>\n";
  }
  doc.axis(x, plot_bottom + 4, "SHAP value");
  return doc.finish();
}

std::string dependence_svg(const DependenceData& data) {
  const double height = 420.0;
  Doc doc(kWidth, height, data.main_feature + " (color: " + data.interaction_feature + ")");
  double xlo = 0.0, xhi = 0.0, ylo = 0.0, yhi = 0.0, clo = 0.0, chi = 0.0;
  if (!data.points.empty()) {
    xlo = xhi = data.points.front().feature_value;
    clo = chi = data.points.front().interaction_value;
  }
  for (const auto& p : data.points) {
    xlo = std::min(xlo, p.feature_value);
    xhi = std::max(xhi, p.feature_value);
    ylo = std::min(ylo, p.shap_value);
    yhi = std::max(yhi, p.shap_value);
    clo = std::min(clo, p.interaction_value);
    chi = std::max(chi, p.interaction_value);
  }
  const Scale x(xlo, xhi, 80.0, kWidth - kRight - 20);
  const Scale y(ylo, yhi, height - kBottom - 30, kTop);
  doc.line(x.out_lo, y(0.0), x.out_hi, y(0.0), "#999999", " stroke-dasharray=\"4 3\"");
  doc.line(x.out_lo, y.out_hi, x.out_lo, y.out_lo, "#333333");
  doc.text(20, (y.out_lo + y.out_hi) / 2, "SHAP value");
  for (const auto& p : data.points) {
    const double t = chi > clo ? (p.interaction_value - clo) / (chi - clo) : 0.0;
    doc.raw() << "<circle class=\"point\" cx=\"" << num(x(p.feature_value)) << "\" cy=\"" << num(y(p.shap_value))
              << "\" r=\"3\" fill=\"" << gradient_color(t) << "\"/>\n";
  }
  doc.axis(x, y.out_lo + 4, data.main_feature);
  return doc.finish();
}

std::string force_svg(const ForceData& data) {
  double pos = 0.0, neg = 0.0;
  for (const auto& c : data.contributions) (c.phi > 0 ? pos : neg) += c.phi;
  // Positive pushes end at the prediction from the left, negative ones
  // start there and extend right, back to base + sum of positives.
  const double left = data.prediction - pos;
  const double right = data.prediction - neg;
  const double lo = std::min({left, data.base_value, data.prediction});
  const double hi = std::max({right, data.base_value, data.prediction});
  const double height = 200.0;
  Doc doc(kWidth, height, "f(x) = " + label_num(data.prediction) + "   base value = " + label_num(data.base_value));
  const Scale x(lo, hi, 40.0, kWidth - 40.0);
  const double bar_y = 70.0;
  const double bar_h = 28.0;

  double cursor = left;
  for (const auto& c : data.contributions) {
    if (!(c.phi > 0)) continue;
    doc.raw() << "<rect class=\"positive\" x=\"" << num(x(cursor)) << "\" y=\"" << num(bar_y) << "\" width=\""
              << num(x(cursor + c.phi) - x(cursor)) << "\" height=\"" << num(bar_h) << "\" fill=\"" << kRed
              << "\" stroke=\"#ffffff\" data-feature=\"" << escape(c.feature) << "\" data-phi=\"" << label_num(c.phi)
              << "\"/>\n";
    cursor += c.phi;
  }
  cursor = data.prediction;
  for (const auto& c : data.contributions) {
    if (!(c.phi < 0)) continue;
    doc.raw() << "<rect class=\"negative\" x=\"" << num(x(cursor)) << "\" y=\"" << num(bar_y) << "\" width=\""
              << num(x(cursor - c.phi) - x(cursor)) << "\" height=\"" << num(bar_h) << "\" fill=\"" << kBlue
              << "\" stroke=\"#ffffff\" data-feature=\"" << escape(c.feature) << "\" data-phi=\"" << label_num(c.phi)
              << "\"/>\n";
    cursor -= c.phi;
  }
  doc.line(x(data.prediction), bar_y - 12, x(data.prediction), bar_y + bar_h + 4, "#000000");
  doc.text(x(data.prediction), bar_y - 16, "f(x) " + label_num(data.prediction), "middle");
  doc.line(x(data.base_value), bar_y + bar_h, x(data.base_value), bar_y + bar_h + 12, "#666666");
  doc.text(x(data.base_value), bar_y + bar_h + 26, "base value " + label_num(data.base_value), "middle");

  // Feature labels under the three largest pushes.
  double label_y = bar_y + bar_h + 48;
  std::size_t shown = 0;
  for (const auto& c : data.contributions) {
    if (c.phi == 0.0 || shown == 3) break;
    doc.text(40, label_y, c.feature + " = " + label_num(c.value) + " (" + (c.phi > 0 ? "+" : "") + label_num(c.phi) + ")");
    label_y += 16;
    ++shown;
  }
  return doc.finish();
}

void render_svg(const featsel::FeatureRanking& ranking, const std::filesystem::path& path) {
  write_file(path, bar_svg(ranking));
}
void render_svg(const SummaryData& data, const std::filesystem::path& path) { write_file(path, summary_svg(data)); }
void render_svg(const DependenceData& data, const std::filesystem::path& path) {
  write_file(path, dependence_svg(data));
}
void render_svg(const ForceData& data, const std::filesystem::path& path) { write_file(path, force_svg(data)); }

}  // namespace flowshap::viz
