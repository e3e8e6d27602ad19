#include "pseudotest/source_syntax.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>

#include "pseudotest/errors.hpp"

namespace pseudotest {
namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool is_literal_prefix(std::string_view w) {
  static constexpr std::array<std::string_view, 9> kPrefixes = {"L", "u", "U", "u8", "R", "LR", "uR", "UR", "u8R"};
  return std::find(kPrefixes.begin(), kPrefixes.end(), w) != kPrefixes.end();
}

constexpr std::array<std::string_view, 28> kPuncts = {
    ">>=", "<<=", "<=>", "->*", "...", "::", "->", "++", "--", "<<", ">>", "<=", ">=", "==",
    "!=",  "&&",  "||",  "+=",  "-=",  "*=", "/=", "%=", "&=", "|=", "^=", ".*", "##", "%:"};

std::size_t scan_quoted(std::string_view s, std::size_t i, char quote) {
  // i points at the opening quote
  std::size_t j = i + 1;
  while (j < s.size()) {
    if (s[j] == '\\') {
      j += 2;
      continue;
    }
    if (s[j] == quote) return j + 1;
    if (s[j] == '\n') break;
    ++j;
  }
  throw SyntaxError(quote == '"' ? "unterminated string literal" : "unterminated character literal", i);
}

std::size_t scan_raw_string(std::string_view s, std::size_t i) {
  // i points at the opening quote of R"delim( ... )delim"
  const std::size_t open = s.find('(', i + 1);
  if (open == std::string_view::npos || open - i - 1 > 16) throw SyntaxError("malformed raw string literal", i);
  const std::string terminator = ")" + std::string(s.substr(i + 1, open - i - 1)) + "\"";
  const std::size_t close = s.find(terminator, open + 1);
  if (close == std::string_view::npos) throw SyntaxError("unterminated raw string literal", i);
  return close + terminator.size();
}

bool is_builtin_type_word(std::string_view w) {
  static const std::set<std::string_view> kWords = {
      "void",     "bool",     "char",   "wchar_t", "char8_t", "char16_t", "char32_t", "short",
      "int",      "long",     "signed", "unsigned", "float",  "double",   "auto",     "const",
      "volatile", "typename", "struct", "class",    "enum",   "union"};
  return kWords.count(w) != 0;
}

bool is_specifier(std::string_view w) {
  static const std::set<std::string_view> kSpecifiers = {
      "static",       "inline",    "virtual",   "constexpr", "consteval", "constinit",
      "explicit",     "friend",    "extern",    "mutable",   "thread_local", "register"};
  return kSpecifiers.count(w) != 0;
}

bool is_non_name_keyword(std::string_view w) {
  static const std::set<std::string_view> kWords = {
      "decltype", "noexcept", "alignas", "__attribute__", "sizeof", "typeof", "__typeof__", "throw",
      "requires", "static_assert", "alignof", "__declspec", "return", "if", "while", "for", "switch"};
  return kWords.count(w) != 0 || is_builtin_type_word(w);
}

class DeclarationParser {
 public:
  DeclarationParser(const std::vector<Token>& tokens, ParsedSource& out) : t_(tokens), out_(out) {}

  void run() { parse_members(false); }

 private:
  struct Scope {
    std::string name;
    bool is_class = false;
    bool anonymous = false;
    bool deprecated = false;
    bool hash_specialization = false;
    Visibility access = Visibility::public_api;
  };

  struct Prefix {
    bool is_template = false;
    bool deprecated = false;
    std::size_t start = 0;
  };

  struct Declarator {
    std::string name;
    std::vector<std::string> qualification;
    std::size_t qual_start = 0;  // first token index of the (qualified) name
    std::size_t open = 0;
    std::size_t close = 0;
    bool is_destructor = false;
    bool is_conversion = false;
    std::vector<Token> conversion_type;
    std::vector<Token> trailing_return;
  };

  const std::vector<Token>& t_;
  ParsedSource& out_;
  std::size_t i_ = 0;
  std::vector<Scope> scopes_;

  std::size_t size() const { return t_.size(); }
  bool is(std::size_t k, std::string_view s) const { return k < t_.size() && t_[k].is(s); }
  bool is_ident(std::size_t k) const { return k < t_.size() && t_[k].kind == TokenKind::identifier; }
  std::size_t offset(std::size_t k) const { return k < t_.size() ? t_[k].begin : (t_.empty() ? 0 : t_.back().end); }

  std::size_t match(std::size_t k, std::string_view open, std::string_view close) const {
    int depth = 0;
    for (std::size_t j = k; j < t_.size(); ++j) {
      if (t_[j].is(open)) {
        ++depth;
      } else if (t_[j].is(close)) {
        if (--depth == 0) return j;
      }
    }
    throw SyntaxError("unbalanced '" + std::string(open) + "'", t_[k].begin);
  }

  std::size_t match_group(std::size_t k) const {
    if (t_[k].is("(")) return match(k, "(", ")");
    if (t_[k].is("[")) return match(k, "[", "]");
    return match(k, "{", "}");
  }

  // k at '<'; returns index after the matching '>'.
  std::size_t skip_angles(std::size_t k) const {
    int depth = 0;
    for (std::size_t j = k; j < t_.size(); ++j) {
      if (t_[j].is("(") || t_[j].is("[") || t_[j].is("{")) {
        j = match_group(j);
        continue;
      }
      if (t_[j].is("<")) ++depth;
      if (t_[j].is(">")) --depth;
      if (t_[j].is(">>")) depth -= 2;
      if (depth <= 0) return j + 1;
    }
    throw SyntaxError("unbalanced '<'", t_[k].begin);
  }

  // Reads an attribute starting at k; returns the index after it.
  std::size_t skip_attribute(std::size_t k, bool& deprecated) const {
    if (is(k, "[") && is(k + 1, "[")) {
      const std::size_t close = match(k, "[", "]");
      for (std::size_t j = k; j < close; ++j)
        if (t_[j].is("deprecated")) deprecated = true;
      return close + 1;
    }
    if (is(k, "__attribute__") || is(k, "alignas") || is(k, "__declspec")) {
      if (!is(k + 1, "(")) return k + 1;
      const std::size_t close = match(k + 1, "(", ")");
      for (std::size_t j = k; j < close; ++j)
        if (t_[j].is("deprecated") || t_[j].is("__deprecated__")) deprecated = true;
      return close + 1;
    }
    return k;
  }

  bool at_attribute(std::size_t k) const {
    return (is(k, "[") && is(k + 1, "[")) || is(k, "__attribute__") || is(k, "alignas") || is(k, "__declspec");
  }

  // Index after the next ';' at nesting depth zero; stops before an unmatched '}'.
  std::size_t skip_to_semicolon(std::size_t k) const {
    while (k < t_.size()) {
      if (t_[k].is(";")) return k + 1;
      if (t_[k].is("}")) return k;
      if (t_[k].is("(") || t_[k].is("[") || t_[k].is("{")) {
        k = match_group(k) + 1;
        continue;
      }
      ++k;
    }
    return k;
  }

  std::vector<std::string> scope_names() const {
    std::vector<std::string> names;
    for (const auto& s : scopes_)
      if (!s.anonymous) names.push_back(s.name);
    return names;
  }

  bool in_class() const { return !scopes_.empty() && scopes_.back().is_class; }
  bool in_anonymous_namespace() const {
    return std::any_of(scopes_.begin(), scopes_.end(), [](const Scope& s) { return s.anonymous; });
  }
  bool any_deprecated_scope() const {
    return std::any_of(scopes_.begin(), scopes_.end(), [](const Scope& s) { return s.deprecated; });
  }

  void parse_members(bool in_braces) {
    while (i_ < size()) {
      if (is(i_, "}")) {
        if (in_braces) {
          ++i_;
          return;
        }
        throw SyntaxError("unbalanced '}'", t_[i_].begin);
      }
      if (is(i_, ";")) {
        ++i_;
        continue;
      }
      if (is(i_, "namespace")) {
        parse_namespace();
        continue;
      }
      if (is(i_, "extern") && i_ + 1 < size() && t_[i_ + 1].kind == TokenKind::string_literal) {
        if (is(i_ + 2, "{")) {
          i_ += 3;
          parse_members(true);
          continue;
        }
        i_ += 2;
      }
      if ((is(i_, "public") || is(i_, "private") || is(i_, "protected")) && is(i_ + 1, ":")) {
        if (!scopes_.empty()) scopes_.back().access = is(i_, "public") ? Visibility::public_api : Visibility::internal;
        i_ += 2;
        continue;
      }
      if (is(i_, "using") || is(i_, "typedef") || is(i_, "static_assert")) {
        i_ = skip_to_semicolon(i_);
        continue;
      }
      parse_declaration();
    }
    if (in_braces) throw SyntaxError("unterminated block", offset(size()));
  }

  void parse_namespace() {
    std::size_t k = i_ + 1;
    std::vector<std::string> names;
    bool deprecated = false;
    while (k < size() && !is(k, "{") && !is(k, "=") && !is(k, ";")) {
      if (at_attribute(k)) {
        k = skip_attribute(k, deprecated);
        continue;
      }
      if (is_ident(k) && !is(k, "inline")) names.push_back(t_[k].text);
      ++k;
    }
    if (!is(k, "{")) {
      i_ = skip_to_semicolon(k);
      return;
    }
    i_ = k + 1;
    const std::size_t depth = scopes_.size();
    if (names.empty()) {
      scopes_.push_back({"", false, true, deprecated, false, Visibility::internal});
    } else {
      for (auto& n : names) scopes_.push_back({n, false, false, deprecated, false, Visibility::public_api});
    }
    parse_members(true);
    scopes_.resize(depth);
  }

  void parse_declaration() {
    Prefix pre;
    pre.start = i_;
    while (i_ < size()) {
      if (is(i_, "template")) {
        if (is(i_ + 1, "<")) {
          i_ = skip_angles(i_ + 1);
          pre.is_template = true;
          continue;
        }
        // explicit instantiation
        i_ = skip_to_semicolon(i_);
        return;
      }
      if (at_attribute(i_)) {
        i_ = skip_attribute(i_, pre.deprecated);
        continue;
      }
      break;
    }
    if (i_ >= size()) return;
    if (is(i_, "class") || is(i_, "struct") || is(i_, "union")) {
      if (try_class(pre)) return;
    }
    if (is(i_, "enum")) {
      i_ = skip_to_semicolon(i_);
      return;
    }
    if (is(i_, "friend") && (is(i_ + 1, "class") || is(i_ + 1, "struct"))) {
      i_ = skip_to_semicolon(i_);
      return;
    }
    general_declaration(pre);
  }

  bool try_class(const Prefix& pre) {
    const bool is_struct = !is(i_, "class");
    std::size_t k = i_ + 1;
    bool deprecated = pre.deprecated;
    while (at_attribute(k)) k = skip_attribute(k, deprecated);
    std::vector<std::string> names;
    bool hash_spec = false;
    while (k < size()) {
      if (is_ident(k) && !is(k, "final")) {
        names.push_back(t_[k].text);
        ++k;
        if (is(k, "<")) {
          if (names.back() == "hash") hash_spec = true;
          k = skip_angles(k);
        }
        if (is(k, "::")) {
          ++k;
          continue;
        }
      }
      break;
    }
    if (is(k, "final")) ++k;
    if (is(k, ";")) {
      i_ = k + 1;
      return true;
    }
    if (is(k, ":")) {
      while (k < size() && !is(k, "{") && !is(k, ";")) {
        if (is(k, "<")) {
          k = skip_angles(k);
          continue;
        }
        if (is(k, "(")) {
          k = match(k, "(", ")") + 1;
          continue;
        }
        ++k;
      }
    }
    if (!is(k, "{")) return false;  // elaborated type specifier in a declaration

    const std::size_t depth = scopes_.size();
    if (names.empty()) names.push_back("(anonymous)");
    for (std::size_t n = 0; n < names.size(); ++n) {
      const bool last = n + 1 == names.size();
      scopes_.push_back({names[n], true, false, deprecated && last, hash_spec && last,
                         is_struct ? Visibility::public_api : Visibility::internal});
    }
    out_.class_fields[join_qualified(scope_names(), "")];
    i_ = k + 1;
    parse_members(true);
    scopes_.resize(depth);
    i_ = skip_to_semicolon(i_);
    return true;
  }

  std::optional<Declarator> declarator_at(std::size_t start, std::size_t open) const {
    Declarator d;
    d.open = open;
    std::size_t name_begin = open;
    // operator functions
    for (std::size_t o = start; o < open; ++o) {
      if (!t_[o].is("operator")) continue;
      std::size_t params_open = o + 1;
      if (is(o + 1, "(") && is(o + 2, ")")) params_open = o + 3;
      else
        while (params_open < size() && !t_[params_open].is("(")) ++params_open;
      if (params_open != open) return std::nullopt;
      std::string name = "operator";
      bool conversion = false;
      for (std::size_t j = o + 1; j < open; ++j) {
        if (t_[j].kind == TokenKind::identifier && !t_[j].is("new") && !t_[j].is("delete")) conversion = true;
        const bool space = t_[j].kind == TokenKind::identifier;
        name += space ? " " + t_[j].text : t_[j].text;
        if (conversion) d.conversion_type.push_back(t_[j]);
      }
      d.name = name;
      d.is_conversion = conversion;
      name_begin = o;
      break;
    }
    if (d.name.empty()) {
      std::size_t q = open;
      if (q == 0) return std::nullopt;
      --q;
      if (t_[q].is(">")) {
        // template-id: walk back to the matching '<'
        int depth = 0;
        while (true) {
          if (t_[q].is(">")) ++depth;
          if (t_[q].is(">>")) depth += 2;
          if (t_[q].is("<")) --depth;
          if (depth == 0 || q == start) break;
          --q;
        }
        if (q == start) return std::nullopt;
        --q;
      }
      if (!is_ident(q) || is_non_name_keyword(t_[q].text) || is_specifier(t_[q].text)) return std::nullopt;
      d.name = t_[q].text;
      name_begin = q;
      if (q > start && t_[q - 1].is("~")) {
        d.is_destructor = true;
        d.name = "~" + d.name;
        name_begin = q - 1;
      }
    }
    // qualification
    std::size_t s = name_begin;
    while (s >= start + 2 && t_[s - 1].is("::")) {
      std::size_t q = s - 2;
      if (t_[q].is(">")) {
        int depth = 0;
        while (q > start) {
          if (t_[q].is(">")) ++depth;
          if (t_[q].is(">>")) depth += 2;
          if (t_[q].is("<")) --depth;
          if (depth == 0) break;
          --q;
        }
        if (q == start) break;
        --q;
      }
      if (!is_ident(q)) break;
      d.qualification.insert(d.qualification.begin(), t_[q].text);
      s = q;
    }
    if (s >= start + 1 && t_[s - 1].is("::")) --s;  // global qualifier
    d.qual_start = s;
    d.close = match(open, "(", ")");
    return d;
  }

  // k is just after the parameter list; consumes cv/ref/noexcept/trailing
  // return and returns the index of the token that ends the declarator.
  std::size_t skip_function_suffix(std::size_t k, Declarator& d, bool& deprecated) const {
    while (k < size()) {
      if (is(k, "const") || is(k, "volatile") || is(k, "&") || is(k, "&&") || is(k, "override") ||
          is(k, "final")) {
        ++k;
        continue;
      }
      if (is(k, "noexcept") || is(k, "throw")) {
        ++k;
        if (is(k, "(")) k = match(k, "(", ")") + 1;
        continue;
      }
      if (at_attribute(k)) {
        k = skip_attribute(k, deprecated);
        continue;
      }
      if (is(k, "->")) {
        ++k;
        while (k < size() && !is(k, "{") && !is(k, ";") && !is(k, "=") && !is(k, "override") &&
               !is(k, "final") && !is(k, "requires")) {
          if (is(k, "(")) {
            const std::size_t c = match(k, "(", ")");
            for (std::size_t j = k; j <= c; ++j) d.trailing_return.push_back(t_[j]);
            k = c + 1;
            continue;
          }
          d.trailing_return.push_back(t_[k]);
          ++k;
        }
        continue;
      }
      if (is(k, "requires")) {
        ++k;
        while (k < size() && !is(k, "{") && !is(k, ";")) {
          if (is(k, "(")) {
            k = match(k, "(", ")") + 1;
            continue;
          }
          ++k;
        }
        continue;
      }
      break;
    }
    return k;
  }

  std::vector<Parameter> parse_params(std::size_t open, std::size_t close) const {
    std::vector<std::vector<Token>> groups(1);
    int depth = 0;
    for (std::size_t j = open + 1; j < close; ++j) {
      const Token& tk = t_[j];
      if (tk.is("(") || tk.is("[") || tk.is("{") || tk.is("<")) ++depth;
      if (tk.is(")") || tk.is("]") || tk.is("}") || tk.is(">")) --depth;
      if (tk.is(">>")) depth -= 2;
      if (tk.is(",") && depth <= 0) {
        groups.emplace_back();
        continue;
      }
      groups.back().push_back(tk);
    }
    std::vector<Parameter> params;
    for (auto& g : groups) {
      if (g.empty()) continue;
      if (g.size() == 1 && g[0].is("void")) continue;
      std::size_t end = g.size();
      for (std::size_t j = 0; j < g.size(); ++j)
        if (g[j].is("=") || g[j].is("[")) {
          end = j;
          break;
        }
      Parameter p;
      std::vector<Token> type(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(end));
      if (end >= 2 && g[end - 1].kind == TokenKind::identifier && !g[end - 2].is("::") &&
          !is_builtin_type_word(g[end - 1].text)) {
        p.name = g[end - 1].text;
        type.pop_back();
      }
      p.type = render_tokens(type);
      params.push_back(std::move(p));
    }
    return params;
  }

  void record_fields(const std::vector<std::string>& names) {
    if (!in_class()) return;
    auto& fields = out_.class_fields[join_qualified(scope_names(), "")];
    for (const auto& n : names) fields.insert(n);
  }

  void general_declaration(const Prefix& pre) {
    std::size_t j = i_;
    int angle = 0;
    bool deprecated = pre.deprecated;
    bool is_friend = false;
    std::optional<Declarator> decl;
    std::vector<std::string> field_names;
    std::vector<std::size_t> prefix_tokens;  // candidate return-type tokens

    auto field_candidate = [&](std::size_t at) {
      if (!decl && angle == 0 && at > i_ && is_ident(at - 1) && !is_builtin_type_word(t_[at - 1].text))
        field_names.push_back(t_[at - 1].text);
    };

    while (j < size()) {
      const Token& tk = t_[j];
      if (!decl && at_attribute(j)) {
        j = skip_attribute(j, deprecated);
        continue;
      }
      if (tk.is("friend")) is_friend = true;
      if (tk.is("(")) {
        if (!decl && angle == 0) {
          if (auto d = declarator_at(i_, j)) {
            decl = std::move(d);
            j = skip_function_suffix(decl->close + 1, *decl, deprecated);
            continue;
          }
        }
        j = match(j, "(", ")") + 1;
        continue;
      }
      if (tk.is("[")) {
        field_candidate(j);
        j = match(j, "[", "]") + 1;
        continue;
      }
      if (!decl) {
        if (tk.is("<")) ++angle;
        if (tk.is(">") && angle > 0) --angle;
        if (tk.is(">>")) angle = std::max(0, angle - 2);
      }
      if (tk.is(";")) {
        if (decl) {
          record_member_declaration(pre, *decl, deprecated);
        } else if (!is_friend) {
          field_candidate(j);
          record_fields(field_names);
        }
        i_ = j + 1;
        return;
      }
      if (tk.is("}")) {
        // missing ';' before the end of the scope; let the caller close it
        i_ = j;
        return;
      }
      if (tk.is("{")) {
        if (decl) {
          emit_function(pre, *decl, deprecated, j, false);
          return;
        }
        field_candidate(j);
        j = match(j, "{", "}") + 1;
        continue;
      }
      if (tk.is("=")) {
        if (decl) {
          record_member_declaration(pre, *decl, deprecated);
          i_ = skip_to_semicolon(j);
          return;
        }
        field_candidate(j);
        if (!is_friend) record_fields(field_names);
        i_ = skip_to_semicolon(j);
        return;
      }
      if (tk.is(":") && angle == 0) {
        if (decl) {
          skip_constructor_body(pre, *decl, deprecated, j);
          return;
        }
        field_candidate(j);
        record_fields(field_names);
        i_ = skip_to_semicolon(j);
        return;
      }
      if (tk.is("try") && decl) {
        // function-try-block: body plus handlers, not analyzed
        std::size_t k = j + 1;
        if (is(k, ":")) {
          while (k < size() && !is(k, "{")) ++k;
        }
        k = match(k, "{", "}") + 1;
        while (is(k, "catch")) {
          k = match(k + 1, "(", ")") + 1;
          k = match(k, "{", "}") + 1;
        }
        i_ = k;
        return;
      }
      if (tk.is(",") && !decl && angle == 0) field_candidate(j);
      if (!decl) prefix_tokens.push_back(j);
      ++j;
    }
    i_ = j;
  }

  void skip_constructor_body(const Prefix& pre, const Declarator& d, bool deprecated, std::size_t colon) {
    std::size_t k = colon + 1;
    while (k < size()) {
      if (is(k, "(")) {
        k = match(k, "(", ")") + 1;
        continue;
      }
      if (is(k, "<")) {
        k = skip_angles(k);
        continue;
      }
      if (is(k, "{")) {
        const bool brace_init = k > 0 && (is_ident(k - 1) || t_[k - 1].is(">"));
        if (brace_init) {
          k = match(k, "{", "}") + 1;
          continue;
        }
        break;
      }
      ++k;
    }
    if (k >= size()) throw SyntaxError("constructor without a body", t_[colon].begin);
    emit_function(pre, d, deprecated, k, true);
  }

  std::vector<Token> return_tokens(const Declarator& d) const {
    std::vector<Token> ret;
    if (!d.trailing_return.empty()) return d.trailing_return;
    if (d.is_conversion) return d.conversion_type;
    for (std::size_t k = i_; k < d.qual_start; ++k) {
      const Token& tk = t_[k];
      if (tk.kind == TokenKind::identifier && is_specifier(tk.text)) continue;
      if (at_attribute(k)) {
        bool ignored = false;
        k = skip_attribute(k, ignored) - 1;
        continue;
      }
      ret.push_back(tk);
    }
    return ret;
  }

  bool has_specifier(const Declarator& d, std::string_view what) const {
    for (std::size_t k = i_; k < d.qual_start; ++k)
      if (t_[k].is(what)) return true;
    return false;
  }

  std::vector<std::string> container_for(const Declarator& d) const {
    auto names = scope_names();
    for (const auto& q : d.qualification) names.push_back(q);
    return names;
  }

  void record_member_declaration(const Prefix&, const Declarator& d, bool deprecated) {
    if (!in_class() || !d.qualification.empty()) return;
    MemberDeclaration md;
    md.deprecated = deprecated;
    md.access = scopes_.back().access;
    const auto key = join_qualified(scope_names(), d.name) + "/" + std::to_string(parse_params(d.open, d.close).size());
    auto& slot = out_.member_declarations[key];
    slot.deprecated = slot.deprecated || md.deprecated;
    slot.access = md.access;
  }

  void emit_function(const Prefix& pre, const Declarator& d, bool deprecated, std::size_t body_open, bool ctor) {
    const std::size_t body_close = match(body_open, "{", "}");
    MethodNode node;
    node.name = d.name;
    node.container = container_for(d);
    node.params = parse_params(d.open, d.close);
    node.return_type = return_tokens(d);
    node.body.assign(t_.begin() + static_cast<std::ptrdiff_t>(body_open + 1),
                     t_.begin() + static_cast<std::ptrdiff_t>(body_close));
    node.body_span = {t_[body_open].begin, t_[body_close].end};
    node.decl_span = {t_[pre.start].begin, t_[body_close].end};
    node.is_template = pre.is_template;
    node.is_constexpr = has_specifier(d, "constexpr") || has_specifier(d, "consteval");
    node.is_static = has_specifier(d, "static");
    node.deprecated = deprecated || any_deprecated_scope();
    node.generated_file = out_.generated;

    const bool member_in_class = in_class() && d.qualification.empty();
    node.owner_is_class = member_in_class || !d.qualification.empty();
    if (has_specifier(d, "friend") && member_in_class) {
      // hidden friend: a namespace-scope function declared inside the class
      node.owner_is_class = false;
    }
    node.in_hash_specialization = member_in_class && scopes_.back().hash_specialization;

    const std::string owner = node.container.empty() ? std::string() : node.container.back();
    const bool same_name = !owner.empty() && node.owner_is_class && d.name == owner;
    const bool no_return = node.return_type.empty() && d.name.rfind("operator", 0) != 0;
    node.is_constructor = ctor || d.is_destructor || same_name || no_return;

    if (member_in_class) node.visibility = scopes_.back().access;
    if (in_anonymous_namespace() || (node.is_static && !node.owner_is_class)) node.visibility = Visibility::internal;

    out_.functions.push_back(std::move(node));
    i_ = body_close + 1;
  }
};

}  // namespace

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  bool line_start = true;
  const std::size_t n = s.size();
  while (i < n) {
    const char c = s[i];
    if (c == '\n') {
      line_start = true;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && s[i + 1] == '/') {
      while (i < n && s[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && s[i + 1] == '*') {
      const std::size_t close = s.find("*/", i + 2);
      if (close == std::string_view::npos) throw SyntaxError("unterminated comment", i);
      i = close + 2;
      continue;
    }
    if (c == '#' && line_start) {
      while (i < n && s[i] != '\n') {
        if (s[i] == '\\' && i + 1 < n && s[i + 1] == '\n') ++i;
        ++i;
      }
      continue;
    }
    line_start = false;
    const std::size_t begin = i;
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < n && is_ident_char(s[j])) ++j;
      const std::string_view word = s.substr(i, j - i);
      if (j < n && (s[j] == '"' || s[j] == '\'') && is_literal_prefix(word)) {
        std::size_t end;
        if (s[j] == '"' && word.back() == 'R') end = scan_raw_string(s, j);
        else end = scan_quoted(s, j, s[j]);
        out.push_back({s[j] == '"' ? TokenKind::string_literal : TokenKind::char_literal,
                       std::string(s.substr(begin, end - begin)), begin, end});
        i = end;
        continue;
      }
      out.push_back({TokenKind::identifier, std::string(word), begin, j});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t j = i + 1;
      while (j < n) {
        const char d = s[j];
        if ((d == '+' || d == '-') && (s[j - 1] == 'e' || s[j - 1] == 'E' || s[j - 1] == 'p' || s[j - 1] == 'P') &&
            !(s[i] == '0' && j == i + 2 && (s[i + 1] == 'x' || s[i + 1] == 'X'))) {
          ++j;
          continue;
        }
        if (d == '\'' && j + 1 < n && std::isalnum(static_cast<unsigned char>(s[j + 1]))) {
          ++j;
          continue;
        }
        if (!is_ident_char(d) && d != '.') break;
        ++j;
      }
      out.push_back({TokenKind::number, std::string(s.substr(i, j - i)), begin, j});
      i = j;
      continue;
    }
    if (c == '"' || c == '\'') {
      const std::size_t end = scan_quoted(s, i, c);
      out.push_back({c == '"' ? TokenKind::string_literal : TokenKind::char_literal,
                     std::string(s.substr(i, end - i)), begin, end});
      i = end;
      continue;
    }
    std::size_t len = 1;
    for (auto p : kPuncts) {
      if (s.substr(i, p.size()) == p) {
        len = p.size();
        break;
      }
    }
    out.push_back({TokenKind::punct, std::string(s.substr(i, len)), begin, i + len});
    i += len;
  }
  return out;
}

std::string render_tokens(const std::vector<Token>& tokens) {
  std::string out;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const auto& tk = tokens[k];
    if (k > 0) {
      const auto& prev = tokens[k - 1];
      const bool word_prev = prev.kind != TokenKind::punct;
      const bool word_cur = tk.kind != TokenKind::punct;
      if (word_prev && word_cur) out += ' ';
      else if (prev.is(",")) out += ' ';
    }
    out += tk.text;
  }
  return out;
}

std::string join_qualified(const std::vector<std::string>& parts, std::string_view name) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "::";
    out += p;
  }
  if (!name.empty()) {
    if (!out.empty()) out += "::";
    out += name;
  }
  return out;
}

std::string MethodNode::qualified_name() const { return join_qualified(container, name); }

ReturnTypeInfo classify_return_type(const std::vector<Token>& tokens) {
  ReturnTypeInfo info;
  std::vector<Token> core;
  for (const auto& tk : tokens) {
    if (tk.kind == TokenKind::identifier &&
        (tk.text == "const" || tk.text == "volatile" || tk.text == "typename" || is_specifier(tk.text)))
      continue;
    core.push_back(tk);
  }
  info.text = render_tokens(tokens);
  if (core.empty()) {
    info.category = ReturnCategory::reference;
    return info;
  }
  if (core.back().is("&") || core.back().is("&&")) {
    info.category = ReturnCategory::reference;
    info.form = ReturnForm::reference;
    return info;
  }
  if (core.back().is("*")) {
    info.form = ReturnForm::pointer;
    const bool char_ptr = core.size() == 2 && (core[0].is("char") || core[0].is("wchar_t"));
    info.category = char_ptr ? ReturnCategory::textual : ReturnCategory::reference;
    return info;
  }

  // head words, ignoring the std:: qualifier
  std::vector<std::string> words;
  bool templated = false;
  for (std::size_t k = 0; k < core.size(); ++k) {
    const auto& tk = core[k];
    if (tk.is("<")) {
      templated = true;
      break;
    }
    if (tk.is("::")) continue;
    if (tk.is("std") && k + 1 < core.size() && core[k + 1].is("::")) continue;
    words.push_back(tk.text);
  }
  std::string joined;
  for (const auto& w : words) joined += (joined.empty() ? "" : " ") + w;

  static const std::set<std::string> kIntegralAliases = {
      "size_t",       "ssize_t",      "ptrdiff_t",    "intptr_t",      "uintptr_t",     "intmax_t",
      "uintmax_t",    "int8_t",       "int16_t",      "int32_t",       "int64_t",       "uint8_t",
      "uint16_t",     "uint32_t",     "uint64_t",     "int_fast8_t",   "int_fast16_t",  "int_fast32_t",
      "int_fast64_t", "uint_fast8_t", "uint_fast16_t", "uint_fast32_t", "uint_fast64_t", "int_least8_t",
      "int_least16_t", "int_least32_t", "int_least64_t", "uint_least8_t", "uint_least16_t", "uint_least32_t",
      "uint_least64_t"};
  static const std::set<std::string> kTextual = {"string", "string_view", "wstring", "wstring_view",
                                                 "u8string", "u16string", "u32string"};
  static const std::set<std::string> kSequence = {"vector", "array", "deque", "list", "forward_list", "span",
                                                  "valarray"};

  if (!templated) {
    if (joined == "void") return info.category = ReturnCategory::unit, info;
    if (joined == "bool") return info.category = ReturnCategory::boolean, info;
    if (joined == "float" || joined == "double" || joined == "long double")
      return info.category = ReturnCategory::floating, info;
    if (joined == "char" || joined == "wchar_t" || joined == "char8_t" || joined == "char16_t" ||
        joined == "char32_t")
      return info.category = ReturnCategory::character, info;
    const bool all_int_words = !words.empty() && std::all_of(words.begin(), words.end(), [](const std::string& w) {
      return w == "signed" || w == "unsigned" || w == "short" || w == "int" || w == "long" || w == "char";
    });
    if (all_int_words) return info.category = ReturnCategory::integral, info;
    if (words.size() == 1 && kIntegralAliases.count(words[0])) return info.category = ReturnCategory::integral, info;
    if (words.size() == 1 && kTextual.count(words[0])) return info.category = ReturnCategory::textual, info;
  } else if (words.size() == 1) {
    if (words[0] == "basic_string" || words[0] == "basic_string_view")
      return info.category = ReturnCategory::textual, info;
    if (kSequence.count(words[0])) return info.category = ReturnCategory::sequence, info;
  }
  info.category = ReturnCategory::reference;
  return info;
}

ParsedSource parse_source(std::string_view source) {
  ParsedSource out;
  out.generated = source.substr(0, 4096).find("@generated") != std::string_view::npos;
  const auto tokens = tokenize(source);
  DeclarationParser parser(tokens, out);
  parser.run();
  return out;
}

}  // namespace pseudotest
