#include "consortia/impact.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "consortia/csv.hpp"
#include "consortia/numeric.hpp"
#include "parallel.hpp"

namespace consortia {

namespace {

constexpr std::size_t kChunkArticles = 1 << 16;

using PartialTable = std::map<StratumKey, CompensatedSum>;

}  // namespace

NormTable build_norm_table(const Corpus& corpus, unsigned workers) {
  const std::size_t n = corpus.size();
  const std::size_t chunks = (n + kChunkArticles - 1) / kChunkArticles;
  std::vector<PartialTable> partial(chunks);
  detail::parallel_tasks(chunks, workers, [&](std::size_t chunk) {
    auto& sums = partial[chunk];
    const std::size_t end = std::min(n, (chunk + 1) * kChunkArticles);
    StratumKey key;
    for (std::size_t i = chunk * kChunkArticles; i < end; ++i) {
      const Article& a = corpus[i];
      const double v = std::log1p(static_cast<double>(a.citations));
      key.year = a.year;
      for (const auto& field : a.fields) {
        key.field = field;
        sums[key].add(v);
      }
    }
  });

  PartialTable total;
  for (const auto& part : partial) {
    for (const auto& [key, sum] : part) total[key].merge(sum);
  }
  NormTable table;
  for (const auto& [key, sum] : total) {
    table.insert(key, Stratum{std::max(0.0, sum.mean()), sum.count()});
  }
  return table;
}

std::optional<double> nlcs(const Article& article, const NormTable& table) {
  const double score = std::log1p(static_cast<double>(article.citations));
  CompensatedSum ratios;
  for (const auto& field : article.fields) {
    const Stratum* s = table.find(field, article.year);
    if (s == nullptr) {
      throw Error(ErrorCode::MissingStratum,
                  "no stratum (" + field + ", " + std::to_string(article.year) + ")", {},
                  article.id);
    }
    if (s->mean_log > 0.0) ratios.add(score / s->mean_log);
  }
  if (ratios.count() == 0) return std::nullopt;
  return ratios.mean();
}

MnlcsResult mnlcs(std::span<const std::string> article_ids, const Corpus& corpus,
                  const NormTable& table) {
  MnlcsResult result;
  CompensatedSum sum;
  for (const auto& id : article_ids) {
    const auto value = nlcs(corpus.at(id), table);
    if (value) {
      sum.add(*value);
      ++result.included;
    } else {
      ++result.excluded;
    }
  }
  if (result.included > 0) result.value = sum.mean();
  return result;
}

void write_norm_table_csv(std::ostream& out, const NormTable& table) {
  out << "field,year,mean_log,n\n";
  char buf[64];
  for (const auto& [key, s] : table) {
    const auto res = std::to_chars(buf, buf + sizeof buf, s.mean_log, std::chars_format::general, 17);
    out << csv::cell(key.field) << ',' << key.year << ',' << std::string_view(buf, res.ptr - buf)
        << ',' << s.n << '\n';
  }
}

namespace {

template <class T>
T parse_number(const std::string& text, std::size_t line, const char* what) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::MalformedLine, std::string("bad ") + what + " '" + text + "'", line);
  }
  return value;
}

}  // namespace

NormTable read_norm_table_csv(std::istream& in) {
  NormTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> cells;
    try {
      cells = csv::split_row(line);
    } catch (const Error& e) {
      throw e.at_line(line_no);
    }
    if (header) {
      header = false;
      if (cells.size() >= 1 && cells[0] == "field") continue;
    }
    if (cells.size() != 4) {
      throw Error(ErrorCode::MalformedLine, "expected field,year,mean_log,n", line_no);
    }
    const int year = parse_number<int>(cells[1], line_no, "year");
    const double mean_log = parse_number<double>(cells[2], line_no, "mean_log");
    const std::size_t n = parse_number<std::size_t>(cells[3], line_no, "n");
    try {
      table.insert(StratumKey{cells[0], year}, Stratum{mean_log, n});
    } catch (const Error& e) {
      throw e.at_line(line_no);
    }
  }
  return table;
}

}  // namespace consortia
