#include "consortia/model.hpp"

#include <cmath>
#include <unordered_set>
#include <utility>

namespace consortia {

namespace {

constexpr bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Decodes one well-formed UTF-8 sequence starting at s[i]. Returns the number
// of bytes consumed, or 0 for a malformed or truncated sequence.
std::size_t decode_utf8(std::string_view s, std::size_t i, char32_t& cp) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  std::size_t len;
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  return len;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Simple one-to-one lowercase mapping for Basic Latin, Latin-1, Latin
// Extended-A, Greek and basic Cyrillic. Other code points map to themselves.
char32_t to_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  if (cp < 0xC0) return cp;
  if (cp <= 0xDE) return cp == 0xD7 ? cp : cp + 0x20;
  if (cp >= 0x100 && cp <= 0x137) return cp | 1;
  if (cp >= 0x139 && cp <= 0x148) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return cp | 1;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17E) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
  if (cp == 0x386) return 0x3AC;
  if (cp >= 0x388 && cp <= 0x38A) return cp + 0x25;
  if (cp == 0x38C) return 0x3CC;
  if (cp == 0x38E || cp == 0x38F) return cp + 0x3F;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  return cp;
}

[[noreturn]] void fail(ErrorCode code, const std::string& id, const std::string& what) {
  throw Error(code, what, {}, id);
}

}  // namespace

std::string normalize_name(std::string_view raw) {
  const std::string_view s = trim(raw);
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    char32_t cp;
    const std::size_t len = decode_utf8(s, i, cp);
    if (len == 0) {
      // Malformed bytes are kept verbatim.
      out.push_back(s[i]);
      ++i;
      continue;
    }
    encode_utf8(to_lower(cp), out);
    i += len;
  }
  return out;
}

std::string normalize_initial(std::string_view raw) {
  const std::string_view s = trim(raw);
  if (s.empty()) return {};
  char32_t cp;
  std::size_t len = decode_utf8(s, 0, cp);
  if (len == 0) len = 1;
  return normalize_name(s.substr(0, len));
}

AuthorRef make_author(std::string id, std::string_view last_name,
                      std::string_view first_initial) {
  return AuthorRef{std::move(id), normalize_name(last_name),
                   normalize_initial(first_initial)};
}

Article validate_article(Article raw) {
  if (raw.id.empty()) fail(ErrorCode::EmptyArticleId, raw.id, "article id is empty");
  if (raw.authors.empty()) {
    fail(ErrorCode::EmptyAuthors, raw.id, "article '" + raw.id + "' has no authors");
  }
  if (raw.fields.empty()) {
    fail(ErrorCode::EmptyFields, raw.id, "article '" + raw.id + "' has no fields");
  }
  if (raw.citations < 0) {
    fail(ErrorCode::NegativeCitations, raw.id,
         "article '" + raw.id + "' has negative citation count " +
             std::to_string(raw.citations));
  }
  for (const auto& field : raw.fields) {
    if (field.empty()) {
      fail(ErrorCode::EmptyFields, raw.id, "article '" + raw.id + "' has an empty field code");
    }
  }
  std::unordered_set<std::string_view> seen;
  seen.reserve(raw.authors.size());
  for (auto& author : raw.authors) {
    if (author.id.empty()) {
      fail(ErrorCode::EmptyAuthorId, raw.id, "article '" + raw.id + "' has an empty author id");
    }
    author.last_name = normalize_name(author.last_name);
    author.first_initial = normalize_initial(author.first_initial);
  }
  for (const auto& author : raw.authors) {
    if (!seen.insert(author.id).second) {
      fail(ErrorCode::DuplicateAuthorId, raw.id,
           "article '" + raw.id + "' lists author '" + author.id + "' twice");
    }
  }
  return raw;
}

bool is_valid(const Article& article) {
  try {
    return validate_article(article) == article;
  } catch (const Error&) {
    return false;
  }
}

std::string_view to_string(OverlapMode mode) {
  return mode == OverlapMode::MaxDenominator ? "max" : "min";
}

OverlapMode parse_overlap_mode(std::string_view text) {
  if (text == "max" || text == "MaxDenominator") return OverlapMode::MaxDenominator;
  if (text == "min" || text == "MinDenominator") return OverlapMode::MinDenominator;
  throw Error(ErrorCode::InvalidParams, "unknown overlap mode '" + std::string(text) + "'");
}

void ClusterParams::validate() const {
  if (!(min_overlap > 0.0 && min_overlap <= 1.0)) {
    throw Error(ErrorCode::InvalidParams, "min_overlap must lie in (0, 1]");
  }
  if (min_authors < 1) throw Error(ErrorCode::InvalidParams, "min_authors must be >= 1");
  if (min_cluster_size < 1) {
    throw Error(ErrorCode::InvalidParams, "min_cluster_size must be >= 1");
  }
}

bool is_valid(const ClusterParams& params) {
  try {
    params.validate();
    return true;
  } catch (const Error&) {
    return false;
  }
}

bool is_valid(const Consortium& consortium, std::size_t min_cluster_size) {
  const auto& ids = consortium.article_ids;
  if (ids.size() < min_cluster_size || ids.empty()) return false;
  for (std::size_t i = 1; i < ids.size(); ++i) {
    if (!(ids[i - 1] < ids[i])) return false;
  }
  return consortium.id == ids.front() && consortium.first_year <= consortium.last_year;
}

std::string_view to_string(AlphaBand band) {
  switch (band) {
    case AlphaBand::CloseAlphabetical: return "close_alphabetical";
    case AlphaBand::PartialAlphabetical: return "partial_alphabetical";
    case AlphaBand::CloseNonAlphabetical: return "close_non_alphabetical";
    case AlphaBand::AntiAlphabetical: return "anti_alphabetical";
  }
  return "unknown";
}

std::string_view describe(AlphaBand band) {
  switch (band) {
    case AlphaBand::CloseAlphabetical: return "close to alphabetical (>= 0.90)";
    case AlphaBand::PartialAlphabetical: return "partial alphabetical (> 0.60 and < 0.90)";
    case AlphaBand::CloseNonAlphabetical: return "close to non-alphabetical (0.40 to 0.60)";
    case AlphaBand::AntiAlphabetical: return "anti-alphabetical (< 0.40)";
  }
  return "unknown";
}

AlphaBand parse_alpha_band(std::string_view text) {
  for (AlphaBand band : kAllBands) {
    if (to_string(band) == text) return band;
  }
  throw Error(ErrorCode::OutOfRange, "unknown alpha band '" + std::string(text) + "'");
}

void NormTable::insert(StratumKey key, Stratum stratum) {
  if (!std::isfinite(stratum.mean_log) || stratum.mean_log < 0.0 || stratum.n == 0) {
    throw Error(ErrorCode::OutOfRange,
                "invalid stratum (" + key.field + ", " + std::to_string(key.year) + ")");
  }
  strata_.insert_or_assign(std::move(key), stratum);
}

const Stratum* NormTable::find(std::string_view field, int year) const {
  const auto it = strata_.find(StratumKey{std::string(field), year});
  return it == strata_.end() ? nullptr : &it->second;
}

namespace {
std::string format_error(ErrorCode code, const std::string& message,
                         const std::optional<std::size_t>& line) {
  std::string out(to_string(code));
  if (line) out += " at line " + std::to_string(*line);
  out += ": ";
  out += message;
  return out;
}
}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyAuthors: return "EmptyAuthors";
    case ErrorCode::EmptyFields: return "EmptyFields";
    case ErrorCode::NegativeCitations: return "NegativeCitations";
    case ErrorCode::EmptyArticleId: return "EmptyArticleId";
    case ErrorCode::EmptyAuthorId: return "EmptyAuthorId";
    case ErrorCode::DuplicateAuthorId: return "DuplicateAuthorId";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::DuplicateArticleId: return "DuplicateArticleId";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::MissingStratum: return "MissingStratum";
    case ErrorCode::UnknownArticleId: return "UnknownArticleId";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::ConstantInput: return "ConstantInput";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string message, std::optional<std::size_t> line,
             std::string record)
    : std::runtime_error(format_error(code, message, line)),
      code_(code),
      line_(line),
      record_(std::move(record)),
      detail_(std::move(message)) {}

Error Error::at_line(std::size_t line) const { return Error(code_, detail_, line, record_); }

}  // namespace consortia
