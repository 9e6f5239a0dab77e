// Copyright 2026 The qliar Authors
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

#include <cctype>
#include <limits>
#include <map>

#include "qliar/reference_graph.hpp"

namespace qliar::graph {

namespace {

struct Token {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
};

/// Recursive descent over one line at a time.
class LineParser {
  public:
    LineParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    bool at_end() {
        skip_space();
        return pos_ >= text_.size() || text_[pos_] == '#';
    }

    // line ::= "(" INT ")" "sentence" "(" INT ")" "is" ("true" | "false")
    struct Parsed {
        Token index;
        std::size_t index_value;
        Token target;
        std::size_t target_value;
        bool polarity;
    };

    Parsed line() {
        Parsed p{};
        expect_symbol('(');
        p.index = integer(p.index_value);
        expect_symbol(')');
        expect_word("sentence");
        expect_symbol('(');
        p.target = integer(p.target_value);
        expect_symbol(')');
        expect_word("is");
        const Token v = word();
        if (v.text == "true") {
            p.polarity = true;
        } else if (v.text == "false") {
            p.polarity = false;
        } else {
            fail(v, "expected 'true' or 'false'");
        }
        if (!at_end()) {
            fail(peek_token(), "unexpected trailing input");
        }
        return p;
    }

  private:
    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) {
            ++pos_;
        }
    }

    Token make(std::size_t start, std::size_t end) const {
        return {std::string(text_.substr(start, end - start)), line_, start + 1};
    }

    Token peek_token() {
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] == '#') {
            return {"end of line", line_, pos_ + 1};
        }
        std::size_t end = pos_;
        if (std::isalnum(static_cast<unsigned char>(text_[end]))) {
            while (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) {
                ++end;
            }
        } else {
            ++end;
        }
        return make(pos_, end);
    }

    [[noreturn]] void fail(const Token &t, const std::string &message) const {
        throw ParseError(ParseError::Kind::Syntax,
                         "line " + std::to_string(t.line) + ", column " + std::to_string(t.column) + ": " +
                             message + ", found '" + t.text + "'",
                         t.line, t.column, t.text);
    }

    void expect_symbol(char c) {
        const Token t = peek_token();
        if (t.text.size() != 1 || t.text[0] != c) {
            fail(t, std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    Token word() {
        const Token t = peek_token();
        if (t.text.empty() || !std::isalpha(static_cast<unsigned char>(t.text[0]))) {
            fail(t, "expected a word");
        }
        pos_ += t.text.size();
        return t;
    }

    void expect_word(const char *w) {
        const Token t = peek_token();
        if (t.text != w) {
            fail(t, std::string("expected '") + w + "'");
        }
        pos_ += t.text.size();
    }

    Token integer(std::size_t &value) {
        const Token t = peek_token();
        bool digits = !t.text.empty();
        for (char c : t.text) {
            digits = digits && std::isdigit(static_cast<unsigned char>(c));
        }
        if (!digits) {
            fail(t, "expected a sentence index");
        }
        value = 0;
        for (char c : t.text) {
            const std::size_t d = static_cast<std::size_t>(c - '0');
            if (value > (std::numeric_limits<std::size_t>::max() - d) / 10) {
                fail(t, "sentence index too large");
            }
            value = value * 10 + d;
        }
        if (value == 0) {
            fail(t, "sentence indices start at 1");
        }
        pos_ += t.text.size();
        return t;
    }

    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

std::string where(const Token &t) {
    return "line " + std::to_string(t.line) + ", column " + std::to_string(t.column);
}

} // namespace

std::size_t SentenceSystem::false_edges() const noexcept {
    std::size_t n = 0;
    for (const auto &r : references) {
        n += r.polarity ? 0 : 1;
    }
    return n;
}

SentenceSystem parse_system(std::string_view source, std::string name) {
    std::map<std::size_t, LineParser::Parsed> entries;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= source.size()) {
        std::size_t end = source.find('\n', start);
        if (end == std::string_view::npos) {
            end = source.size();
        }
        ++line_no;
        LineParser lp(source.substr(start, end - start), line_no);
        if (!lp.at_end()) {
            auto p = lp.line();
            const auto [it, inserted] = entries.emplace(p.index_value, p);
            if (!inserted) {
                throw ParseError(ParseError::Kind::DuplicateIndex,
                                 where(p.index) + ": duplicate sentence index (" + p.index.text +
                                     "), first defined on line " + std::to_string(it->second.index.line),
                                 p.index.line, p.index.column, p.index.text);
            }
        }
        start = end + 1;
    }

    if (entries.empty()) {
        throw ParseError(ParseError::Kind::Syntax, "line 1, column 1: expected at least one sentence", 1, 1, "");
    }

    // Indices must be exactly 1..n.
    std::size_t expected = 1;
    for (const auto &[index, p] : entries) {
        if (index != expected) {
            throw ParseError(ParseError::Kind::NonContiguous,
                             where(p.index) + ": sentence indices must be contiguous from 1; sentence (" +
                                 std::to_string(expected) + ") is missing before (" + p.index.text + ")",
                             p.index.line, p.index.column, p.index.text);
        }
        ++expected;
    }

    SentenceSystem s;
    s.name = std::move(name);
    s.source = std::string(source);
    s.references.reserve(entries.size());
    for (const auto &[index, p] : entries) {
        if (p.target_value > entries.size()) {
            throw ParseError(ParseError::Kind::DanglingReference,
                             where(p.target) + ": sentence (" + p.index.text + ") refers to sentence (" +
                                 p.target.text + "), which does not exist",
                             p.target.line, p.target.column, p.target.text);
        }
        s.references.push_back({p.target_value, p.polarity});
    }
    return s;
}

} // namespace qliar::graph
