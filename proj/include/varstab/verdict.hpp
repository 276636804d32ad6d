#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "varstab/index_set.hpp"
#include "varstab/matrix.hpp"

namespace varstab {

enum class Status { Holds, Fails, Disproved, Inconclusive };

std::string to_string(Status s);
/// 0 HOLDS, 1 FAILS/DISPROVED, 2 INCONCLUSIVE.
int exit_code(Status s);

/// Named vectors, index sets and notes backing a verdict.
struct Certificate {
  std::vector<std::pair<std::string, Vec>> vectors;
  std::vector<std::pair<std::string, IndexSet>> faces;
  std::vector<std::pair<std::string, std::string>> notes;

  void set(const std::string& name, Vec v);
  void set_face(const std::string& name, IndexSet J);
  void note(const std::string& key, std::string text);

  const Vec* vec(const std::string& name) const;
  std::optional<IndexSet> face(const std::string& name) const;
  const std::string* text(const std::string& key) const;
  bool empty() const { return vectors.empty() && faces.empty() && notes.empty(); }
};

struct StratumReport {
  std::string label;
  Status status = Status::Holds;
  Certificate data;
};

struct Verdict {
  std::string condition;
  Status status = Status::Inconclusive;
  std::string reason;
  Certificate certificate;
  std::vector<StratumReport> strata;
  std::vector<Verdict> prerequisites;
};

std::string render_text(const Verdict& v);

}  // namespace varstab
