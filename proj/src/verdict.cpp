#include "varstab/verdict.hpp"

#include <sstream>

namespace varstab {

std::string to_string(Status s) {
  switch (s) {
    case Status::Holds: return "HOLDS";
    case Status::Fails: return "FAILS";
    case Status::Disproved: return "DISPROVED";
    case Status::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

int exit_code(Status s) {
  switch (s) {
    case Status::Holds: return 0;
    case Status::Fails:
    case Status::Disproved: return 1;
    case Status::Inconclusive: return 2;
  }
  return 2;
}

void Certificate::set(const std::string& name, Vec v) {
  for (auto& [k, val] : vectors) {
    if (k == name) {
      val = std::move(v);
      return;
    }
  }
  vectors.emplace_back(name, std::move(v));
}

void Certificate::set_face(const std::string& name, IndexSet J) {
  for (auto& [k, val] : faces) {
    if (k == name) {
      val = J;
      return;
    }
  }
  faces.emplace_back(name, J);
}

void Certificate::note(const std::string& key, std::string text) {
  for (auto& [k, val] : notes) {
    if (k == key) {
      val = std::move(text);
      return;
    }
  }
  notes.emplace_back(key, std::move(text));
}

const Vec* Certificate::vec(const std::string& name) const {
  for (const auto& [k, val] : vectors) {
    if (k == name) return &val;
  }
  return nullptr;
}

std::optional<IndexSet> Certificate::face(const std::string& name) const {
  for (const auto& [k, val] : faces) {
    if (k == name) return val;
  }
  return std::nullopt;
}

const std::string* Certificate::text(const std::string& key) const {
  for (const auto& [k, val] : notes) {
    if (k == key) return &val;
  }
  return nullptr;
}

namespace {

void render_cert(std::ostringstream& os, const Certificate& c, const std::string& indent) {
  for (const auto& [k, v] : c.vectors) os << indent << k << " = " << to_string(v) << "\n";
  for (const auto& [k, J] : c.faces) os << indent << k << " = " << J.str() << "\n";
  for (const auto& [k, t] : c.notes) os << indent << k << ": " << t << "\n";
}

void render(std::ostringstream& os, const Verdict& v, const std::string& indent) {
  os << indent << v.condition << ": " << to_string(v.status);
  if (!v.reason.empty()) os << " (" << v.reason << ")";
  os << "\n";
  render_cert(os, v.certificate, indent + "  ");
  for (const auto& s : v.strata) {
    os << indent << "  [" << to_string(s.status) << "] " << s.label << "\n";
    render_cert(os, s.data, indent + "      ");
  }
  if (!v.prerequisites.empty()) {
    os << indent << "  prerequisites:\n";
    for (const auto& p : v.prerequisites) render(os, p, indent + "    ");
  }
}

}  // namespace

std::string render_text(const Verdict& v) {
  std::ostringstream os;
  render(os, v, "");
  return os.str();
}

}  // namespace varstab
