#include "adrc/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "adrc/errors.hpp"

namespace adrc::harness {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
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

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

void write_trace_csv(const Trace& trace, const std::filesystem::path& path) {
  if (trace.empty()) throw ValidationError("cannot write an empty trace");
  auto out = open_for_write(path);
  const auto names = trace.column_names();
  for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
  out << '\n';
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const auto row = trace.row(k);
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << g12(row[c]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_trace_metadata(const Trace& trace, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  for (const auto& [key, value] : trace.metadata) out << key << ": " << value << '\n';
}

void write_metrics_csv(std::span<const MetricsReport> reports, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "r,agent,tail_sup_tracking,tail_sup_estimation,max_state_norm\n";
  for (const auto& report : reports) {
    for (std::size_t i = 0; i < report.agents.size(); ++i) {
      const auto& a = report.agents[i];
      out << g12(report.r) << ',' << i + 1 << ',' << g12(a.tail_sup_tracking) << ',' << g12(a.tail_sup_estimation)
          << ',' << g12(a.max_state_norm) << '\n';
    }
  }
}

void emit_plot_svg(std::span<const PlotSeries> series, const std::string& title, const std::filesystem::path& path,
                   double range_from) {
  constexpr double width = 720, height = 440;
  constexpr double left = 70, right = 150, top = 40, bottom = 50;
  constexpr std::size_t max_points = 2000;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double t_min = INFINITY, t_max = -INFINITY, v_min = INFINITY, v_max = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t k = 0; k < s.t.size(); ++k) {
      if (!std::isfinite(s.values[k])) continue;
      t_min = std::min(t_min, s.t[k]);
      t_max = std::max(t_max, s.t[k]);
      if (s.t[k] < range_from) continue;
      v_min = std::min(v_min, s.values[k]);
      v_max = std::max(v_max, s.values[k]);
    }
  }
  if (!std::isfinite(t_min)) t_min = 0, t_max = 1, v_min = -1, v_max = 1;
  if (t_max == t_min) t_max = t_min + 1;
  if (v_max == v_min) v_max += 0.5, v_min -= 0.5;
  const double pad = 0.05 * (v_max - v_min);
  v_min -= pad;
  v_max += pad;

  auto px = [&](double t) { return left + (t - t_min) / (t_max - t_min) * plot_w; };
  auto py = [&](double v) { return top + (v_max - std::clamp(v, v_min, v_max)) / (v_max - v_min) * plot_h; };

  auto out = open_for_write(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape_xml(title) << "</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int tick = 0; tick <= 5; ++tick) {
    const double t = t_min + (t_max - t_min) * tick / 5.0;
    const double v = v_min + (v_max - v_min) * tick / 5.0;
    out << "<line x1=\"" << px(t) << "\" y1=\"" << top + plot_h << "\" x2=\"" << px(t) << "\" y2=\""
        << top + plot_h + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(t) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">" << short_num(t)
        << "</text>\n";
    out << "<line x1=\"" << left - 5 << "\" y1=\"" << py(v) << "\" x2=\"" << left << "\" y2=\"" << py(v)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">" << short_num(v)
        << "</text>\n";
  }
  if (v_min < 0 && v_max > 0) {
    out << "<line x1=\"" << left << "\" y1=\"" << py(0) << "\" x2=\"" << left + plot_w << "\" y2=\"" << py(0)
        << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">t (s)</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    const char* color = kPalette[s % std::size(kPalette)];
    const std::size_t step = std::max<std::size_t>(1, ser.t.size() / max_points);
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t k = 0; k < ser.t.size(); k += step) {
      if (!std::isfinite(ser.values[k])) continue;
      out << short_num(px(ser.t[k])) << ',' << short_num(py(ser.values[k])) << ' ';
    }
    out << "\"/>\n";
    const double ly = top + 14 + 18.0 * static_cast<double>(s);
    out << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + plot_w + 36 << "\" y2=\""
        << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << left + plot_w + 42 << "\" y=\"" << ly + 4 << "\">" << escape_xml(ser.label) << "</text>\n";
  }
  out << "</svg>\n";
}

std::vector<std::filesystem::path> emit_run_plots(const RunResult& run, const std::filesystem::path& dir,
                                                  const std::string& prefix) {
  const Trace& trace = run.trace;
  if (trace.empty()) throw ValidationError("cannot plot an empty trace");
  Vector t(trace.size());
  for (std::size_t k = 0; k < trace.size(); ++k) t[k] = trace.time(k);

  std::vector<PlotSeries> tracking, states, estimation;
  for (int i = 0; i < trace.followers(); ++i) {
    const std::string id = std::to_string(i + 1);
    PlotSeries track{"y" + id + " - y0", t, Vector(trace.size())};
    PlotSeries second{"x" + id + "_2", t, Vector(trace.size())};
    for (std::size_t k = 0; k < trace.size(); ++k) {
      track.values[k] = trace.y(k, i) - trace.x0(k, 0);
      second.values[k] = trace.order() >= 2 ? trace.x(k, i, 1) : trace.x(k, i, 0);
    }
    tracking.push_back(std::move(track));
    states.push_back(std::move(second));
    if (static_cast<std::size_t>(i) < run.estimation.size()) {
      estimation.push_back({"agent " + id, t, run.estimation[static_cast<std::size_t>(i)].series});
    }
  }

  std::vector<std::filesystem::path> written{dir / (prefix + "_tracking.svg"), dir / (prefix + "_states.svg"),
                                             dir / (prefix + "_estimation.svg")};
  emit_plot_svg(tracking, "Output tracking errors y_i - y_0", written[0]);
  emit_plot_svg(states, trace.order() >= 2 ? "Second follower states x_i2" : "Follower states x_i1", written[1]);
  // Skip the observer peaking transient when choosing the vertical range.
  emit_plot_svg(estimation, "Total disturbance estimation errors", written[2], t.back() * 0.05);
  return written;
}

}  // namespace adrc::harness
