#include "piv/config.hpp"

#include "piv/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace piv {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>> &schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"input", {"frame_a", "frame_b", "convert_color"}},
      {"preprocess",
       {"clahe", "clahe_tile", "clahe_clip", "clahe_bins", "highpass", "highpass_sigma", "cap",
        "cap_n"}},
      {"correlate", {"windows", "steps", "overlap", "method", "deform", "search_radius"}},
      {"postprocess",
       {"n_global", "local_radius", "n_local", "median_radius", "smoothing", "tolerance", "u_min",
        "u_max", "v_min", "v_max"}},
      {"derive", {"fields", "scale"}},
      {"output", {"dir", "colormap_cell", "vorticity_autoscale"}},
  };
  return s;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::vector<std::string> list(const std::string &value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ParameterError("empty item in list '" + value + "'");
    out.push_back(item);
  }
  return out;
}

class Section {
public:
  Section(const pt::ptree *tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  bool has(const std::string &key) const { return tree_ && tree_->find(key) != tree_->not_found(); }

  std::string raw(const std::string &key) const {
    return trim(tree_->get<std::string>(pt::ptree::path_type(key, '\0')));
  }

  double real(const std::string &key, double fallback) const {
    if (!has(key)) return fallback;
    return to_real(raw(key), key);
  }

  int integer(const std::string &key, int fallback) const {
    if (!has(key)) return fallback;
    return to_int(raw(key), key);
  }

  bool flag(const std::string &key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = raw(key);
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    throw ParameterError(where(key) + ": expected a boolean, got '" + v + "'");
  }

  std::string text(const std::string &key, const std::string &fallback) const {
    return has(key) ? raw(key) : fallback;
  }

  double to_real(const std::string &v, const std::string &key) const {
    char *end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(d))
      throw ParameterError(where(key) + ": expected a number, got '" + v + "'");
    return d;
  }

  int to_int(const std::string &v, const std::string &key) const {
    const double d = to_real(v, key);
    if (d != std::floor(d) || std::abs(d) > 1e9)
      throw ParameterError(where(key) + ": expected an integer, got '" + v + "'");
    return static_cast<int>(d);
  }

  std::string where(const std::string &key) const { return "[" + name_ + "] " + key; }

private:
  const pt::ptree *tree_;
  std::string name_;
};

std::string fmt_real(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

template <class T, class F>
std::string join(const std::vector<T> &xs, F f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += f(xs[i]);
  }
  return out;
}

} // namespace

void PipelineConfig::validate() const {
  if (frame_a.empty() || frame_b.empty()) throw ParameterError("[input] frame_a and frame_b are required");
  if (output_dir.empty()) throw ParameterError("[output] dir must not be empty");
  preprocess.validate();
  postprocess.validate();
  if (passes.empty()) throw ParameterError("[correlate] needs at least one pass");
  for (std::size_t i = 0; i < passes.size(); ++i) {
    passes[i].validate();
    if (i > 0 && passes[i].window > passes[i - 1].window)
      throw ParameterError("[correlate] windows must be non-increasing");
  }
  if (!(scale > 0.0)) throw ParameterError("[derive] scale must be > 0");
  if (colormap_cell < 0) throw ParameterError("[output] colormap_cell must be >= 0");
}

PipelineConfig parse_config(const std::string &text, const std::filesystem::path &base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error &e) {
    throw ParameterError(std::string("config: ") + e.what());
  }

  for (const auto &[name, sub] : tree) {
    auto it = schema().find(name);
    if (it == schema().end()) {
      if (!sub.data().empty())
        throw ParameterError("config: key '" + name + "' outside any section");
      throw ParameterError("config: unknown section [" + name + "]");
    }
    for (const auto &[key, value] : sub)
      if (!it->second.count(key))
        throw ParameterError("config: unknown key '" + key + "' in [" + name + "]");
  }
  auto section = [&](const std::string &name) {
    auto it = tree.find(name);
    return Section(it == tree.not_found() ? nullptr : &it->second, name);
  };

  PipelineConfig cfg;

  const Section in = section("input");
  auto resolve = [&](const std::string &p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };
  if (in.has("frame_a")) cfg.frame_a = resolve(in.raw("frame_a"));
  if (in.has("frame_b")) cfg.frame_b = resolve(in.raw("frame_b"));
  cfg.convert_color = in.flag("convert_color", cfg.convert_color);

  const Section pre = section("preprocess");
  auto &pc = cfg.preprocess;
  pc.clahe_enabled = pre.flag("clahe", pc.clahe_enabled);
  pc.clahe_tile = pre.integer("clahe_tile", pc.clahe_tile);
  pc.clahe_clip = pre.real("clahe_clip", pc.clahe_clip);
  pc.clahe_bins = pre.integer("clahe_bins", pc.clahe_bins);
  pc.hpf_enabled = pre.flag("highpass", pc.hpf_enabled);
  pc.hpf_sigma = pre.real("highpass_sigma", pc.hpf_sigma);
  pc.cap_enabled = pre.flag("cap", pc.cap_enabled);
  pc.cap_n = pre.real("cap_n", pc.cap_n);

  const Section cor = section("correlate");
  if (cor.has("windows") || cor.has("steps") || cor.has("overlap") || cor.has("method") ||
      cor.has("deform") || cor.has("search_radius")) {
    std::vector<int> windows;
    if (cor.has("windows")) {
      for (const auto &w : list(cor.raw("windows"))) windows.push_back(cor.to_int(w, "windows"));
    } else {
      for (const auto &p : cfg.passes) windows.push_back(p.window);
    }
    if (cor.has("steps") && cor.has("overlap"))
      throw ParameterError("[correlate] give either steps or overlap, not both");

    std::vector<int> steps;
    if (cor.has("steps")) {
      for (const auto &s : list(cor.raw("steps"))) steps.push_back(cor.to_int(s, "steps"));
      if (steps.size() != windows.size())
        throw ParameterError("[correlate] steps must list one value per window");
    } else {
      const double overlap = cor.real("overlap", 0.5);
      if (!(overlap >= 0.0 && overlap < 1.0))
        throw ParameterError("[correlate] overlap must lie in [0, 1)");
      for (int w : windows) steps.push_back(std::max(1, static_cast<int>(std::lround(w * (1.0 - overlap)))));
    }

    std::vector<Method> methods;
    for (const auto &m : list(cor.text("method", "fft"))) methods.push_back(parse_method(m));
    if (methods.size() != 1 && methods.size() != windows.size())
      throw ParameterError("[correlate] method must be one value or one per window");
    const Deform deform = parse_deform(cor.text("deform", "linear"));
    const int radius = cor.integer("search_radius", 0);

    cfg.passes.clear();
    for (std::size_t i = 0; i < windows.size(); ++i)
      cfg.passes.push_back({windows[i], steps[i], methods.size() == 1 ? methods[0] : methods[i],
                            deform, radius});
  }

  const Section post = section("postprocess");
  auto &qc = cfg.postprocess;
  qc.n_global = post.real("n_global", qc.n_global);
  qc.local_radius = post.integer("local_radius", qc.local_radius);
  qc.n_local = post.real("n_local", qc.n_local);
  qc.median_radius = post.integer("median_radius", qc.median_radius);
  qc.smoothing_enabled = post.flag("smoothing", qc.smoothing_enabled);
  qc.tolerance = post.real("tolerance", qc.tolerance);
  const int nlim = post.has("u_min") + post.has("u_max") + post.has("v_min") + post.has("v_max");
  if (nlim == 4)
    qc.limits = VelocityLimits{post.real("u_min", 0), post.real("u_max", 0), post.real("v_min", 0),
                               post.real("v_max", 0)};
  else if (nlim != 0)
    throw ParameterError("[postprocess] velocity limits need all of u_min, u_max, v_min, v_max");

  const Section der = section("derive");
  if (der.has("fields")) {
    cfg.derive.clear();
    const std::string f = der.raw("fields");
    if (f != "none")
      for (const auto &q : list(f)) cfg.derive.push_back(parse_quantity(q));
  }
  cfg.scale = der.real("scale", cfg.scale);

  const Section out = section("output");
  if (out.has("dir")) {
    std::filesystem::path d(out.raw("dir"));
    cfg.output_dir = d.is_relative() && !base_dir.empty() ? base_dir / d : d;
  }
  cfg.colormap_cell = out.integer("colormap_cell", cfg.colormap_cell);
  cfg.vorticity_autoscale = out.flag("vorticity_autoscale", cfg.vorticity_autoscale);

  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::string format_config(const PipelineConfig &c) {
  std::ostringstream o;
  auto b = [](bool v) { return v ? "true" : "false"; };
  o << "[input]\n"
    << "frame_a = " << c.frame_a.string() << "\n"
    << "frame_b = " << c.frame_b.string() << "\n"
    << "convert_color = " << b(c.convert_color) << "\n\n";
  const auto &p = c.preprocess;
  o << "[preprocess]\n"
    << "clahe = " << b(p.clahe_enabled) << "\n"
    << "clahe_tile = " << p.clahe_tile << "\n"
    << "clahe_clip = " << fmt_real(p.clahe_clip) << "\n"
    << "clahe_bins = " << p.clahe_bins << "\n"
    << "highpass = " << b(p.hpf_enabled) << "\n"
    << "highpass_sigma = " << fmt_real(p.hpf_sigma) << "\n"
    << "cap = " << b(p.cap_enabled) << "\n"
    << "cap_n = " << fmt_real(p.cap_n) << "\n\n";
  o << "[correlate]\n"
    << "windows = " << join(c.passes, [](const PassSpec &s) { return std::to_string(s.window); }) << "\n"
    << "steps = " << join(c.passes, [](const PassSpec &s) { return std::to_string(s.step); }) << "\n"
    << "method = "
    << join(c.passes, [](const PassSpec &s) { return std::string(to_string(s.method)); }) << "\n"
    << "deform = " << (c.passes.empty() ? "linear" : to_string(c.passes.back().deform)) << "\n"
    << "search_radius = " << (c.passes.empty() ? 0 : c.passes.back().search_radius) << "\n\n";
  const auto &q = c.postprocess;
  o << "[postprocess]\n"
    << "n_global = " << fmt_real(q.n_global) << "\n"
    << "local_radius = " << q.local_radius << "\n"
    << "n_local = " << fmt_real(q.n_local) << "\n"
    << "median_radius = " << q.median_radius << "\n"
    << "smoothing = " << b(q.smoothing_enabled) << "\n"
    << "tolerance = " << fmt_real(q.tolerance) << "\n";
  if (q.limits)
    o << "u_min = " << fmt_real(q.limits->u_min) << "\nu_max = " << fmt_real(q.limits->u_max)
      << "\nv_min = " << fmt_real(q.limits->v_min) << "\nv_max = " << fmt_real(q.limits->v_max)
      << "\n";
  o << "\n[derive]\n"
    << "fields = "
    << (c.derive.empty() ? std::string("none")
                         : join(c.derive, [](Quantity x) { return std::string(to_string(x)); }))
    << "\n"
    << "scale = " << fmt_real(c.scale) << "\n\n";
  o << "[output]\n"
    << "dir = " << c.output_dir.string() << "\n"
    << "colormap_cell = " << c.colormap_cell << "\n"
    << "vorticity_autoscale = " << b(c.vorticity_autoscale) << "\n";
  return o.str();
}

} // namespace piv
