#include "keel/golden.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace keel::golden {

// Compiled-in checksums of the shipped transcriptions; a file that fails to
// reproduce one of these is rejected even if its own checksum field was
// edited to match.
namespace {
constexpr std::uint64_t kChecksumM05 = 0xb9359c1ba32e7564ULL;
constexpr std::uint64_t kChecksumM06 = 0x7f247a39681c2372ULL;
constexpr std::uint64_t kChecksumIncidence = 0x582fb23b4206d746ULL;
}  // namespace

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string canonical_payload(const GoldenCollection& g) {
  std::ostringstream os;
  os << "n=" << g.n_points << ";";
  for (const auto& e : g.entries) {
    os << "L" << e.l << "G" << e.g << "T";
    for (size_t i = 0; i < e.twists.size(); ++i) os << (i ? "," : "") << e.twists[i];
    os << ";";
  }
  return os.str();
}

std::string canonical_payload(const GoldenIncidence& g) {
  std::ostringstream os;
  for (const auto& p : g.pairs) os << p.a << "*" << p.b << "=" << p.curve << ";";
  return os.str();
}

std::string default_data_dir() {
#ifdef KEEL_DATA_DIR
  return KEEL_DATA_DIR;
#else
  return "data";
#endif
}

static nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open golden file: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

GoldenCollection load_collection(const std::string& path, int n_points) {
  nlohmann::json j = load_json(path);
  GoldenCollection g;
  g.n_points = j.at("n").get<int>();
  if (g.n_points != n_points)
    throw std::runtime_error("golden file is for a different space: " + path);
  for (const auto& e : j.at("entries")) {
    GoldenEntry entry;
    entry.l = e.at("L").get<int>();
    entry.g = e.value("G", -1);
    entry.twists = e.at("twists").get<std::vector<int>>();
    entry.tex = e.value("tex", "");
    entry.flagged = e.value("flagged", false);
    g.entries.push_back(entry);
  }
  g.checksum = std::stoull(j.at("checksum").get<std::string>(), nullptr, 16);
  const std::uint64_t actual = fnv1a64(canonical_payload(g));
  const std::uint64_t pinned = (n_points == 5) ? kChecksumM05 : kChecksumM06;
  if (actual != g.checksum || actual != pinned)
    throw std::runtime_error("checksum error in golden file: " + path);
  return g;
}

GoldenIncidence load_incidence(const std::string& path) {
  nlohmann::json j = load_json(path);
  GoldenIncidence g;
  for (const auto& p : j.at("pairs")) {
    g.pairs.push_back({p.at("a").get<std::string>(), p.at("b").get<std::string>(),
                       p.at("curve").get<std::string>()});
  }
  g.checksum = std::stoull(j.at("checksum").get<std::string>(), nullptr, 16);
  const std::uint64_t actual = fnv1a64(canonical_payload(g));
  if (actual != g.checksum || actual != kChecksumIncidence)
    throw std::runtime_error("checksum error in golden file: " + path);
  return g;
}

static std::vector<int> twist_indices(const collections::Provenance& p, int n_points) {
  std::vector<int> out;
  for (const auto& t : p.twists) {
    if (n_points == 6) out.push_back(std::stoi(t.substr(1)));
    else out.push_back(t.back() - '0');
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<DiffLine> diff_collection(const collections::PipelineResult& run,
                                      const GoldenCollection& g) {
  std::vector<DiffLine> diffs;
  const int n = g.n_points;
  const size_t count = std::max(run.final.objs.size(), g.entries.size());
  for (size_t i = 0; i < count; ++i) {
    std::string ours = i < run.final.objs.size()
                           ? collections::render_label(run.final.objs[i].prov, n)
                           : "(missing)";
    std::string want = "(missing)";
    bool flagged = false;
    bool equal = false;
    if (i < g.entries.size()) {
      const auto& e = g.entries[i];
      collections::Provenance gp;
      gp.l = e.l;
      gp.g = e.g;
      for (int t : e.twists)
        gp.twists.insert(n == 6 ? "E" + std::to_string(t)
                                : "D\xCF\x83" + std::to_string(t));
      want = collections::render_label(gp, n);
      flagged = e.flagged;
      if (i < run.final.objs.size()) {
        const auto& p = run.final.objs[i].prov;
        equal = (p.l == e.l) && (p.g == e.g) && (twist_indices(p, n) == e.twists);
      }
    }
    if (!equal) diffs.push_back({static_cast<int>(i) + 1, flagged, ours, want});
  }
  return diffs;
}

}  // namespace keel::golden
