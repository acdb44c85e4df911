// Copyright 2026 The FactScout Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// A forgiving streaming HTML scanner. It does not build a DOM; it tracks
// just enough state (open text blocks, open tables, bold depth) to harvest
// paragraph text, tables and links the way a browser would display them.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

#include "factscout/ingest.h"
#include "factscout/nlp.h"

namespace factscout::ingest {

namespace {

// Replaces invalid UTF-8 with U+FFFD. Returns the number of replacements.
size_t sanitize_utf8(std::string_view in, std::string &out) {
  size_t bad = 0;
  out.clear();
  out.reserve(in.size());
  for (size_t i = 0; i < in.size();) {
    unsigned char c = static_cast<unsigned char>(in[i]);
    size_t len = c < 0x80 ? 1 : (c & 0xE0) == 0xC0 ? 2 : (c & 0xF0) == 0xE0 ? 3
                              : (c & 0xF8) == 0xF0 ? 4 : 0;
    bool ok = len > 0 && i + len <= in.size();
    for (size_t k = 1; ok && k < len; ++k) {
      ok = (static_cast<unsigned char>(in[i + k]) & 0xC0) == 0x80;
    }
    if (ok && len == 2 && c < 0xC2) ok = false;  // overlong
    if (ok) {
      out.append(in.substr(i, len));
      i += len;
    } else {
      out += "\xEF\xBF\xBD";
      ++bad;
      ++i;
    }
  }
  return bad;
}

void append_utf8(std::string &out, unsigned long cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string decode_entities(std::string_view s) {
  static const std::map<std::string, unsigned long, std::less<>> kNamed = {
      {"amp", '&'},     {"lt", '<'},      {"gt", '>'},      {"quot", '"'},
      {"apos", '\''},   {"nbsp", 0xA0},   {"ndash", 0x2013}, {"mdash", 0x2014},
      {"lsquo", 0x2018}, {"rsquo", 0x2019}, {"ldquo", 0x201C}, {"rdquo", 0x201D},
      {"hellip", 0x2026}, {"deg", 0xB0},  {"pound", 0xA3},  {"euro", 0x20AC},
      {"copy", 0xA9},   {"times", 0xD7},  {"frac12", 0xBD},
  };
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out += s[i];
      continue;
    }
    size_t semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out += '&';
      continue;
    }
    std::string_view name = s.substr(i + 1, semi - i - 1);
    if (!name.empty() && name[0] == '#') {
      unsigned long cp = 0;
      bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
      std::string digits(name.substr(hex ? 2 : 1));
      if (digits.empty() ||
          digits.find_first_not_of(hex ? "0123456789abcdefABCDEF" : "0123456789") !=
              std::string::npos) {
        out += '&';
        continue;
      }
      cp = std::stoul(digits.substr(0, 8), nullptr, hex ? 16 : 10);
      append_utf8(out, cp);
      i = semi;
    } else if (auto it = kNamed.find(name); it != kNamed.end()) {
      append_utf8(out, it->second);
      i = semi;
    } else {
      out += '&';
    }
  }
  return out;
}

// Collapses runs of whitespace (including U+00A0) into one space and trims.
std::string collapse_space(std::string_view s) {
  std::string out;
  bool pending = false;
  for (size_t i = 0; i < s.size(); ++i) {
    bool space = std::isspace(static_cast<unsigned char>(s[i]));
    if (!space && static_cast<unsigned char>(s[i]) == 0xC2 && i + 1 < s.size() &&
        static_cast<unsigned char>(s[i + 1]) == 0xA0) {
      space = true;
      ++i;
    }
    if (space) {
      pending = !out.empty();
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += s[i];
  }
  return out;
}

struct Tag {
  std::string name;  // lower-case
  bool closing = false;
  bool self_closing = false;
  std::map<std::string, std::string> attrs;
};

bool is_text_block(const std::string &name) {
  return name == "p" || name == "li" ||
         (name.size() == 2 && name[0] == 'h' && name[1] >= '1' && name[1] <= '6');
}

// Elements whose start implicitly closes an open <p>.
bool closes_paragraph(const std::string &name) {
  static const std::set<std::string> kBlock = {
      "p",     "div",     "table",  "ul",     "ol",     "dl",    "section",
      "article", "aside", "blockquote", "header", "footer", "nav", "form",
      "hr",    "pre",     "h1",     "h2",     "h3",     "h4",    "h5",
      "h6",    "figure",  "main",   "address", "fieldset"};
  return kBlock.count(name) > 0;
}

bool is_void(const std::string &name) {
  static const std::set<std::string> kVoid = {
      "br", "hr", "img", "input", "meta", "link", "area", "base",
      "col", "embed", "source", "track", "wbr", "param"};
  return kVoid.count(name) > 0;
}

int parse_span_attr(const std::map<std::string, std::string> &attrs,
                    const char *key) {
  auto it = attrs.find(key);
  if (it == attrs.end()) return 1;
  int v = 0;
  for (char c : it->second) {
    if (!std::isdigit(static_cast<unsigned char>(c))) break;
    v = v * 10 + (c - '0');
    if (v > 1000) break;
  }
  return std::clamp(v, 1, 1000);
}

struct TableBuilder {
  TableGrid grid;
  bool in_row = false;
  bool in_cell = false;
  std::string cell_text;
  CellSpan cell_span;
  CellEmphasis cell_emphasis;

  void open_row() {
    close_row();
    grid.rows.emplace_back();
    grid.cell_spans.emplace_back();
    grid.emphasis.emplace_back();
    in_row = true;
  }
  void open_cell(bool th, CellSpan span) {
    close_cell();
    if (!in_row) open_row();
    in_cell = true;
    cell_text.clear();
    cell_span = span;
    cell_emphasis = CellEmphasis{th, false};
  }
  void close_cell() {
    if (!in_cell) return;
    grid.rows.back().push_back(collapse_space(cell_text));
    grid.cell_spans.back().push_back(cell_span);
    grid.emphasis.back().push_back(cell_emphasis);
    in_cell = false;
  }
  void close_row() {
    close_cell();
    if (in_row && grid.rows.back().empty()) {
      grid.rows.pop_back();
      grid.cell_spans.pop_back();
      grid.emphasis.pop_back();
    }
    in_row = false;
  }
};

class HtmlScanner {
 public:
  HtmlScanner(std::string_view html, const std::string &doc_id)
      : html_(html), doc_id_(doc_id) {}

  ParsedHtml run() {
    while (pos_ < html_.size()) {
      if (html_[pos_] == '<' && try_markup()) continue;
      size_t next = html_.find('<', pos_ + 1);
      if (next == std::string_view::npos) next = html_.size();
      on_text(html_.substr(pos_, next - pos_));
      pos_ = next;
    }
    flush_block();
    while (!tables_.empty()) close_table();
    out_.title = collapse_space(decode_entities(title_));
    return std::move(out_);
  }

 private:
  // Handles markup at pos_. Returns false when '<' is literal text.
  bool try_markup() {
    std::string_view rest = html_.substr(pos_);
    if (rest.substr(0, 4) == "<!--") {
      size_t end = html_.find("-->", pos_ + 4);
      pos_ = end == std::string_view::npos ? html_.size() : end + 3;
      return true;
    }
    if (rest.size() > 1 && (rest[1] == '!' || rest[1] == '?')) {
      size_t end = html_.find('>', pos_);
      pos_ = end == std::string_view::npos ? html_.size() : end + 1;
      return true;
    }
    std::optional<Tag> tag = parse_tag();
    if (!tag) return false;
    if (tag->closing) {
      on_end(tag->name);
    } else {
      on_start(*tag);
      if (tag->name == "script" || tag->name == "style") skip_raw_text(tag->name);
      if (tag->name == "title") read_title();
    }
    return true;
  }

  std::optional<Tag> parse_tag() {
    size_t i = pos_ + 1;
    Tag tag;
    if (i < html_.size() && html_[i] == '/') {
      tag.closing = true;
      ++i;
    }
    if (i >= html_.size() || !std::isalpha(static_cast<unsigned char>(html_[i])))
      return std::nullopt;
    while (i < html_.size() &&
           (std::isalnum(static_cast<unsigned char>(html_[i])) || html_[i] == '-'))
      tag.name += static_cast<char>(std::tolower(static_cast<unsigned char>(html_[i++])));
    // Attributes.
    while (i < html_.size() && html_[i] != '>') {
      char c = html_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (c == '/') {
        tag.self_closing = true;
        ++i;
        continue;
      }
      std::string key;
      while (i < html_.size() && !std::isspace(static_cast<unsigned char>(html_[i])) &&
             html_[i] != '=' && html_[i] != '>' && html_[i] != '/')
        key += static_cast<char>(std::tolower(static_cast<unsigned char>(html_[i++])));
      while (i < html_.size() && std::isspace(static_cast<unsigned char>(html_[i]))) ++i;
      std::string value;
      if (i < html_.size() && html_[i] == '=') {
        ++i;
        while (i < html_.size() && std::isspace(static_cast<unsigned char>(html_[i]))) ++i;
        if (i < html_.size() && (html_[i] == '"' || html_[i] == '\'')) {
          char quote = html_[i++];
          size_t end = html_.find(quote, i);
          if (end == std::string_view::npos) end = html_.size();
          value = std::string(html_.substr(i, end - i));
          i = std::min(end + 1, html_.size());
        } else {
          while (i < html_.size() && !std::isspace(static_cast<unsigned char>(html_[i])) &&
                 html_[i] != '>')
            value += html_[i++];
        }
      }
      if (!key.empty()) tag.attrs.emplace(key, decode_entities(value));
    }
    pos_ = std::min(i + 1, html_.size());
    return tag;
  }

  size_t find_ci(std::string_view needle, size_t from) const {
    for (size_t i = from; i + needle.size() <= html_.size(); ++i) {
      bool match = true;
      for (size_t k = 0; k < needle.size() && match; ++k) {
        match = std::tolower(static_cast<unsigned char>(html_[i + k])) == needle[k];
      }
      if (match) return i;
    }
    return std::string_view::npos;
  }

  void skip_raw_text(const std::string &name) {
    size_t end = find_ci("</" + name, pos_);
    if (end == std::string_view::npos) {
      pos_ = html_.size();
      return;
    }
    size_t close = html_.find('>', end);
    pos_ = close == std::string_view::npos ? html_.size() : close + 1;
  }

  void read_title() {
    size_t end = find_ci("</title", pos_);
    if (end == std::string_view::npos) end = html_.size();
    title_ = std::string(html_.substr(pos_, end - pos_));
    size_t close = end == html_.size() ? end : html_.find('>', end);
    pos_ = close == std::string_view::npos ? html_.size() : close + 1;
  }

  TableBuilder *table() { return tables_.empty() ? nullptr : &tables_.back(); }
  bool in_cell() { return table() && table()->in_cell; }

  void on_start(const Tag &tag) {
    const std::string &name = tag.name;
    if (name == "a") {
      if (auto it = tag.attrs.find("href"); it != tag.attrs.end() && !it->second.empty())
        out_.links.push_back(it->second);
    }
    if (name == "br") {
      on_text(" ");
      return;
    }
    if (name == "b" || name == "strong") {
      if (!tag.self_closing) ++bold_depth_;
      return;
    }
    if (in_cell() && name != "table" && name != "td" && name != "th" &&
        name != "tr") {
      if (is_text_block(name) || closes_paragraph(name)) on_text(" ");
      return;
    }
    if (closes_paragraph(name) && !blocks_.empty() && blocks_.back() == "p") {
      flush_block();
      blocks_.pop_back();
    }
    if (name == "table") {
      flush_block();
      tables_.emplace_back();
      tables_.back().grid.doc_id = doc_id_;
      return;
    }
    if (table()) {
      if (name == "tr") {
        table()->open_row();
        return;
      }
      if (name == "td" || name == "th") {
        table()->open_cell(name == "th",
                           CellSpan{parse_span_attr(tag.attrs, "rowspan"),
                                    parse_span_attr(tag.attrs, "colspan")});
        return;
      }
    }
    if (is_text_block(name) && !tag.self_closing && !is_void(name)) {
      flush_block();
      blocks_.push_back(name);
    }
  }

  void on_end(const std::string &name) {
    if (name == "b" || name == "strong") {
      if (bold_depth_ > 0) --bold_depth_;
      return;
    }
    if (name == "table") {
      if (table()) close_table();
      return;
    }
    if (table()) {
      if (name == "td" || name == "th") {
        table()->close_cell();
        return;
      }
      if (name == "tr") {
        table()->close_row();
        return;
      }
      if (in_cell()) {
        if (is_text_block(name)) on_text(" ");
        return;
      }
    }
    if (is_text_block(name)) {
      auto it = std::find(blocks_.rbegin(), blocks_.rend(), name);
      if (it == blocks_.rend()) return;  // stray end tag
      flush_block();
      blocks_.erase(std::next(it).base(), blocks_.end());
    }
  }

  void on_text(std::string_view raw) {
    if (in_cell()) {
      std::string text = decode_entities(raw);
      if (bold_depth_ > 0 && !collapse_space(text).empty())
        table()->cell_emphasis.is_bold = true;
      table()->cell_text += text;
      return;
    }
    if (blocks_.empty() || table()) return;
    block_text_ += decode_entities(raw);
  }

  void flush_block() {
    std::string text = collapse_space(block_text_);
    block_text_.clear();
    if (text.empty()) return;
    auto sentences = make_sentences(text, doc_id_,
                                    static_cast<int>(out_.sentences.size()));
    for (Sentence &s : sentences) out_.sentences.push_back(std::move(s));
  }

  void close_table() {
    TableBuilder done = std::move(tables_.back());
    tables_.pop_back();
    done.close_row();
    if (!done.grid.rows.empty()) {
      done.grid.ordinal = static_cast<int>(out_.tables.size());
      out_.tables.push_back(std::move(done.grid));
    }
  }

  std::string_view html_;
  std::string doc_id_;
  size_t pos_ = 0;
  std::vector<std::string> blocks_;
  std::string block_text_;
  std::vector<TableBuilder> tables_;
  int bold_depth_ = 0;
  std::string title_;
  ParsedHtml out_;
};

}  // namespace

ParsedHtml parse_html(std::string_view payload, const std::string &doc_id) {
  if (payload.find('\0') != std::string_view::npos) {
    throw Error(ErrorCode::kMalformedMarkup, "payload contains NUL bytes");
  }
  std::string text;
  size_t bad = sanitize_utf8(payload, text);
  if (!payload.empty() && bad * 10 > payload.size()) {
    throw Error(ErrorCode::kMalformedMarkup, "payload is not UTF-8 text");
  }
  return HtmlScanner(text, doc_id).run();
}

}  // namespace factscout::ingest
