#include "qca/report.hpp"

#include <json.hpp>

#include <cstdio>
#include <map>
#include <sstream>

namespace qca {
namespace {

using njson = nlohmann::ordered_json;

std::string fmt_err(const CheckResult& r) {
  if (r.mode == Mode::exact && r.exact_zero) return "0 (exact)";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", r.max_error);
  return buf;
}

std::string suite_of(const std::string& id) {
  auto p = id.find('/');
  return p == std::string::npos ? std::string("misc") : id.substr(0, p);
}

std::string tail_of(const std::string& id) {
  auto p = id.find('/');
  return p == std::string::npos ? id : id.substr(p + 1);
}

std::string md_escape(std::string s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '|')
      out += "\\|";
    else if (c == '\n')
      out += ' ';
    else
      out += c;
  }
  return out;
}

} // namespace

std::string report_json(const std::vector<CheckResult>& results,
                        const SuiteConfig& cfg, bool stable) {
  njson doc;
  doc["version"] = 1;
  njson jcfg;
  jcfg["suites"] = cfg.suites;
  jcfg["seed"] = cfg.seed;
  jcfg["order"] = cfg.order;
  jcfg["samples"] = cfg.samples;
  jcfg["tol"] = cfg.tol;
  jcfg["trunc_k"] = cfg.trunc_k;
  doc["config"] = std::move(jcfg);
  njson arr = njson::array();
  for (const auto& r : results) {
    njson jr;
    jr["id"] = r.id;
    jr["status"] = status_str(r.status);
    jr["mode"] = mode_str(r.mode);
    if (r.mode == Mode::exact && r.exact_zero)
      jr["max_error"] = "0 (exact)";
    else
      jr["max_error"] = r.max_error;
    jr["tolerance"] = r.tolerance;
    jr["samples"] = r.samples;
    njson jc = njson::object();
    for (const auto& [k, v] : r.constants) jc[k] = {v.real(), v.imag()};
    jr["constants"] = std::move(jc);
    jr["runtime_ms"] = stable ? 0 : r.runtime_ms;
    jr["anchor"] = r.anchor;
    if (!r.note.empty()) jr["note"] = r.note;
    arr.push_back(std::move(jr));
  }
  doc["results"] = std::move(arr);
  return doc.dump(2) + "\n";
}

std::string report_markdown(const std::vector<CheckResult>& results,
                            const SuiteConfig& cfg) {
  // group by suite, keeping first-appearance order
  std::vector<std::string> order;
  std::map<std::string, std::vector<const CheckResult*>> groups;
  for (const auto& r : results) {
    std::string s = suite_of(r.id);
    if (!groups.count(s)) order.push_back(s);
    groups[s].push_back(&r);
  }

  std::ostringstream os;
  os << "# Verification report\n\n";
  os << "config: seed " << cfg.seed << ", order " << cfg.order << ", trunc K "
     << cfg.trunc_k;
  if (cfg.samples > 0) os << ", samples " << cfg.samples;
  if (cfg.tol > 0) os << ", tol " << cfg.tol;
  os << "\n";

  for (const auto& s : order) {
    const auto& rs = groups[s];
    int pass = 0, fail = 0, skip = 0;
    for (auto* r : rs) {
      if (r->status == Status::pass)
        ++pass;
      else if (r->status == Status::fail)
        ++fail;
      else
        ++skip;
    }
    os << "\n## " << s << " — " << rs.size() << " checks: " << pass
       << " pass, " << fail << " fail, " << skip << " skipped\n\n";
    os << "| check | status | mode | max error | samples | identity |\n";
    os << "|---|---|---|---|---|---|\n";
    for (auto* r : rs)
      os << "| " << md_escape(tail_of(r->id)) << " | " << status_str(r->status)
         << " | " << mode_str(r->mode) << " | " << fmt_err(*r) << " | "
         << r->samples << " | " << md_escape(r->anchor) << " |\n";
    bool any_note = false;
    for (auto* r : rs) {
      if (r->note.empty() || r->status == Status::pass) continue;
      if (!any_note) os << "\n";
      any_note = true;
      os << "- " << status_str(r->status) << ": `" << tail_of(r->id) << "` — "
         << md_escape(r->note) << "\n";
    }
  }
  return os.str();
}

} // namespace qca
