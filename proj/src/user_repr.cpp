#include "echonet/user_repr.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "echonet/error.hpp"

namespace echonet {
namespace {

bool word_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

void split_words(std::string_view word, std::vector<std::string>& out) {
  std::string current;
  for (std::size_t i = 0; i < word.size(); ++i) {
    const auto c = static_cast<unsigned char>(word[i]);
    if (word_char(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (c == '\'' && !current.empty() && i + 1 < word.size() &&
               word_char(static_cast<unsigned char>(word[i + 1]))) {
      current.push_back('\'');
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
}

}  // namespace

std::string_view to_string(ReprKind k) {
  switch (k) {
    case ReprKind::EMBD: return "EMBD";
    case ReprKind::TM_S: return "TM_S";
    case ReprKind::TM_F: return "TM_F";
  }
  return "?";
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::string_view word = text.substr(i, j - i);
    i = j;
    if (word.empty()) continue;
    std::string lower(word);
    for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    // Leading echo parentheses do not hide a URL or mention.
    std::string_view bare = lower;
    while (!bare.empty() && (bare.front() == '(' || bare.front() == ')')) bare.remove_prefix(1);
    if (starts_with(bare, "http://") || starts_with(bare, "https://") || starts_with(bare, "www.") ||
        starts_with(bare, "@")) {
      continue;
    }
    split_words(lower, tokens);
  }
  return tokens;
}

std::vector<std::string> user_document(const Corpus& corpus, std::string_view user_id) {
  std::vector<std::string> doc;
  for (const Tweet* t : corpus.timeline(user_id)) {
    auto tokens = tokenize(t->text);
    doc.insert(doc.end(), std::make_move_iterator(tokens.begin()), std::make_move_iterator(tokens.end()));
  }
  return doc;
}

void EmbeddingTable::add(std::string token, std::vector<double> vector) {
  if (vector.size() != dim_)
    throw DataError("embedding for '" + token + "' has " + std::to_string(vector.size()) +
                    " values, expected " + std::to_string(dim_));
  for (double v : vector)
    if (!std::isfinite(v)) throw DataError("embedding for '" + token + "' has a non-finite entry");
  vectors_[std::move(token)] = std::move(vector);
}

const std::vector<double>* EmbeddingTable::find(std::string_view token) const {
  auto it = vectors_.find(std::string(token));
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingTable read_embeddings(std::istream& in) {
  std::string line;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> values;
    std::string field;
    while (fields >> field) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(field, &used));
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw ParseError(line_no, "non-numeric embedding value '" + field + "'");
      }
    }
    // A fastText-style "<count> <dim>" header.
    if (line_no == 1 && values.size() == 1 && token.find_first_not_of("0123456789") == std::string::npos)
      continue;
    rows.emplace_back(std::move(token), std::move(values));
  }
  if (rows.empty()) throw DataError("embedding file holds no vectors");
  EmbeddingTable table(rows.front().second.size());
  for (auto& [token, values] : rows) table.add(std::move(token), std::move(values));
  return table;
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return read_embeddings(in);
}

UserVector embed_user(std::string_view user_id, std::span<const std::string> doc, const EmbeddingTable& table) {
  UserVector uv{std::string(user_id), ReprKind::EMBD, std::vector<double>(table.dim(), 0.0), false};
  std::size_t known = 0;
  for (const auto& token : doc) {
    if (const auto* vec = table.find(token)) {
      for (std::size_t i = 0; i < vec->size(); ++i) uv.values[i] += (*vec)[i];
      ++known;
    }
  }
  if (known == 0) {
    uv.degenerate = true;
    return uv;
  }
  for (auto& v : uv.values) v /= static_cast<double>(known);
  return uv;
}

UserVector salient_topic(const UserVector& tm_f) {
  UserVector out{tm_f.user_id, ReprKind::TM_S, std::vector<double>(tm_f.values.size(), 0.0), tm_f.degenerate};
  if (tm_f.values.empty()) return out;
  std::size_t best = 0;
  for (std::size_t k = 1; k < tm_f.values.size(); ++k)
    if (tm_f.values[k] > tm_f.values[best]) best = k;
  out.values[best] = 1.0;
  return out;
}

}  // namespace echonet
