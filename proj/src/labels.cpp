#include "pulse_tn/labels.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

namespace pulse_tn {
namespace {

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw LabelFormatError("labels line " + std::to_string(line_no) + ": " + what);
}

double parse_number(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
    fail(line_no, "not a number: '" + std::string(field) + "'");
  }
  return v;
}

void check_rate(double bpm, std::size_t line_no, std::string_view id) {
  if (bpm < 30.0 || bpm > 180.0) {
    fail(line_no, "hr_bpm for '" + std::string(id) + "' outside [30, 180]: " + std::to_string(bpm));
  }
}

}  // namespace

LabelMap parse_labels(std::string_view text, const HrPipelineConfig& pipeline) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t line_no = 0;
  for (std::size_t pos = 0; pos <= text.size();) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == text.npos ? text.npos : nl - pos);
    ++line_no;
    if (!trim(line).empty()) lines.emplace_back(line_no, line);
    if (nl == text.npos) break;
    pos = nl + 1;
  }
  if (lines.empty()) throw LabelFormatError("labels: missing header");

  const auto header = split_fields(lines.front().second);
  const bool per_video = header == std::vector<std::string_view>{"video_id", "hr_bpm"};
  const bool series = header == std::vector<std::string_view>{"video_id", "t_s", "bvp"};
  if (!per_video && !series) {
    fail(lines.front().first, "header must be 'video_id,hr_bpm' or 'video_id,t_s,bvp'");
  }

  LabelMap out;
  if (per_video) {
    for (std::size_t k = 1; k < lines.size(); ++k) {
      const auto [no, line] = lines[k];
      const auto fields = split_fields(line);
      if (fields.size() != 2 || fields[0].empty()) fail(no, "expected 'video_id,hr_bpm'");
      const double bpm = parse_number(fields[1], no);
      check_rate(bpm, no, fields[0]);
      if (!out.emplace(std::string(fields[0]), bpm).second) {
        fail(no, "duplicate video_id '" + std::string(fields[0]) + "'");
      }
    }
    return out;
  }

  struct Series {
    std::vector<double> t, v;
    std::size_t last_line = 0;
  };
  std::map<std::string, Series, std::less<>> by_video;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto [no, line] = lines[k];
    const auto fields = split_fields(line);
    if (fields.size() != 3 || fields[0].empty()) fail(no, "expected 'video_id,t_s,bvp'");
    Series& s = by_video[std::string(fields[0])];
    const double t = parse_number(fields[1], no);
    if (!s.t.empty() && !(t > s.t.back())) fail(no, "t_s must be strictly increasing per video");
    s.t.push_back(t);
    s.v.push_back(parse_number(fields[2], no));
    s.last_line = no;
  }
  for (auto& [id, s] : by_video) {
    if (s.t.size() < 2) fail(s.last_line, "video '" + id + "' needs at least 2 samples");
    const double fps = static_cast<double>(s.t.size() - 1) / (s.t.back() - s.t.front());
    try {
      out.emplace(id, video_hr(Waveform(std::move(s.v), fps), pipeline).bpm);
    } catch (const std::exception& e) {
      fail(s.last_line, "cannot derive heart rate for '" + id + "': " + e.what());
    }
  }
  return out;
}

LabelMap read_labels(const std::filesystem::path& path, const HrPipelineConfig& pipeline) {
  std::ifstream in(path);
  if (!in) throw LabelFormatError("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_labels(text.str(), pipeline);
}

void append_label(const std::filesystem::path& path, std::string_view video_id, double hr_bpm) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw LabelFormatError("cannot open " + path.string() + " for appending");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, hr_bpm);
  if (fresh) out << "video_id,hr_bpm\n";
  out << video_id << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
  if (!out) throw LabelFormatError("write failed: " + path.string());
}

}  // namespace pulse_tn
