#include "consortia/json_codec.hpp"

namespace consortia::json_codec {

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::MalformedLine, "invalid report JSON: " + what);
}

template <class T>
Json optional_value(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <class T>
std::optional<T> read_optional(const Json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

}  // namespace

Json to_json(const Consortium& c) {
  return Json{{"consortium_id", c.id},
              {"size", c.size()},
              {"first_year", c.first_year},
              {"last_year", c.last_year},
              {"article_ids", c.article_ids}};
}

Json to_json(std::span<const Consortium> consortia) {
  Json out = Json::array();
  for (const auto& c : consortia) out.push_back(to_json(c));
  return out;
}

Consortium consortium_from_json(const Json& doc) {
  try {
    Consortium c;
    c.article_ids = doc.at("article_ids").get<std::vector<std::string>>();
    std::sort(c.article_ids.begin(), c.article_ids.end());
    c.id = doc.at("consortium_id").get<std::string>();
    c.first_year = doc.at("first_year").get<int>();
    c.last_year = doc.at("last_year").get<int>();
    if (const auto size = read_optional<std::size_t>(doc, "size"); size && *size != c.size()) {
      bad("size does not match article_ids for " + c.id);
    }
    if (!is_valid(c)) bad("inconsistent consortium " + c.id);
    return c;
  } catch (const Json::exception& e) {
    bad(e.what());
  }
}

std::vector<Consortium> consortia_from_json(const Json& doc) {
  if (!doc.is_array()) bad("expected an array of consortia");
  std::vector<Consortium> out;
  out.reserve(doc.size());
  for (const auto& entry : doc) out.push_back(consortium_from_json(entry));
  return out;
}

Json to_json(const ClusterParams& p) {
  return Json{{"min_authors", p.min_authors},
              {"min_overlap", p.min_overlap},
              {"min_cluster_size", p.min_cluster_size},
              {"overlap_mode", to_string(p.overlap_mode)}};
}

Json to_json(const ConsortiumReport& r) {
  Json per_paper = Json::array();
  for (std::size_t i = 0; i < r.per_paper_alpha.size(); ++i) {
    per_paper.push_back({{"article_id", r.consortium.article_ids.at(i)},
                         {"alpha", optional_value(r.per_paper_alpha[i])}});
  }
  Json out = to_json(r.consortium);
  out["mnlcs"] = optional_value(r.mnlcs);
  out["included_articles"] = r.included_articles;
  out["excluded_articles"] = r.excluded_articles;
  out["alpha_mean"] = optional_value(r.alpha_mean);
  out["alpha_band"] = r.alpha_band ? Json(to_string(*r.alpha_band)) : Json(nullptr);
  out["truncated_articles"] = r.truncated_articles;
  out["per_paper_alpha"] = std::move(per_paper);
  return out;
}

Json to_json(std::span<const ConsortiumReport> reports) {
  Json out = Json::array();
  for (const auto& r : reports) out.push_back(to_json(r));
  return out;
}

ConsortiumReport report_from_json(const Json& doc) {
  try {
    ConsortiumReport r;
    r.consortium = consortium_from_json(doc);
    r.mnlcs = read_optional<double>(doc, "mnlcs");
    r.included_articles = doc.value("included_articles", std::size_t{0});
    r.excluded_articles = doc.value("excluded_articles", std::size_t{0});
    r.alpha_mean = read_optional<double>(doc, "alpha_mean");
    if (const auto band = read_optional<std::string>(doc, "alpha_band")) {
      r.alpha_band = parse_alpha_band(*band);
    }
    r.truncated_articles = doc.value("truncated_articles", std::size_t{0});
    // Per-paper entries are keyed by article id; map them onto sorted ids.
    std::map<std::string, std::optional<double>> by_id;
    if (const auto it = doc.find("per_paper_alpha"); it != doc.end()) {
      for (const auto& entry : *it) {
        by_id[entry.at("article_id").get<std::string>()] = read_optional<double>(entry, "alpha");
      }
    }
    r.per_paper_alpha.reserve(r.consortium.size());
    for (const auto& id : r.consortium.article_ids) {
      const auto found = by_id.find(id);
      r.per_paper_alpha.push_back(found == by_id.end() ? std::nullopt : found->second);
    }
    return r;
  } catch (const Json::exception& e) {
    bad(e.what());
  }
}

std::vector<ConsortiumReport> reports_from_json(const Json& doc) {
  const Json& list = doc.is_object() && doc.contains("reports") ? doc["reports"] : doc;
  if (!list.is_array()) bad("expected an array of reports");
  std::vector<ConsortiumReport> out;
  out.reserve(list.size());
  for (const auto& entry : list) out.push_back(report_from_json(entry));
  return out;
}

Json to_json(const Correlation& c) {
  return Json{{"rho", c.rho}, {"p", c.p}, {"n", c.n}, {"exact_p", optional_value(c.exact_p)}};
}

Json to_json(const ConsortiumCorrelations& c) {
  return Json{{"year_vs_mnlcs", c.year_vs_mnlcs ? to_json(*c.year_vs_mnlcs) : Json(nullptr)},
              {"size_vs_mnlcs", c.size_vs_mnlcs ? to_json(*c.size_vs_mnlcs) : Json(nullptr)},
              {"used", c.used},
              {"excluded", c.excluded},
              {"small_sample", c.small_sample},
              {"diagnostics", c.diagnostics}};
}

Json to_json(const BandTallies& tallies) {
  Json out = Json::object();
  for (AlphaBand band : kAllBands) {
    const BandTally& t = tallies[static_cast<std::size_t>(band)];
    out[std::string(to_string(band))] = {{"consortia", t.consortium_count},
                                         {"papers", t.paper_count}};
  }
  return out;
}

Json to_json(const SizeHistogram& h) {
  Json counts = Json::array();
  for (const auto& [size, count] : h.counts) counts.push_back({{"size", size}, {"count", count}});
  return Json{{"total", h.total()}, {"counts", std::move(counts)}};
}

Json to_json(const DetectionMetrics& m) {
  return Json{{"recall", m.recall},     {"recovered", m.recovered}, {"merges", m.merges},
              {"splits", m.splits},     {"spurious", m.spurious},   {"planted", m.planted},
              {"detected", m.detected}};
}

}  // namespace consortia::json_codec
