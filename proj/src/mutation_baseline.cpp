#include "pseudotest/mutation_baseline.hpp"

#include <algorithm>
#include <set>

#include "pseudotest/errors.hpp"
#include "pseudotest/source_syntax.hpp"

namespace pseudotest {
namespace {

const std::set<std::string, std::less<>> kStatementKeywords = {
    "return", "throw",  "delete",   "new",       "sizeof",   "alignof",     "typeid",      "decltype",
    "if",     "while",  "for",      "switch",    "do",       "else",        "case",        "default",
    "break",  "continue", "goto",   "static_assert", "co_return", "co_await", "co_yield", "using",
    "typedef", "static_cast", "dynamic_cast", "const_cast", "reinterpret_cast", "noexcept", "requires"};

bool is_identifier(const Token& t) { return t.kind == TokenKind::identifier; }

bool ends_operand(const Token& t) {
  if (t.kind == TokenKind::number || t.kind == TokenKind::string_literal || t.kind == TokenKind::char_literal)
    return true;
  if (t.kind == TokenKind::identifier) return !kStatementKeywords.count(t.text);
  return t.is(")") || t.is("]");
}

// Indices of '<' / '>' / '>>' tokens that look like template brackets.
std::set<std::size_t> template_brackets(const std::vector<Token>& t) {
  std::set<std::size_t> out;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!t[i].is("<") || !is_identifier(t[i - 1]) || out.count(i)) continue;
    int depth = 1;
    std::vector<std::size_t> marks{i};
    std::size_t j = i + 1;
    bool ok = false;
    for (; j < t.size(); ++j) {
      const auto& tk = t[j];
      if (tk.is("<")) {
        ++depth;
        marks.push_back(j);
      } else if (tk.is(">") || tk.is(">>")) {
        depth -= tk.is(">>") ? 2 : 1;
        marks.push_back(j);
        if (depth <= 0) {
          ok = depth == 0;
          break;
        }
      } else if (!(is_identifier(tk) || tk.kind == TokenKind::number || tk.is("::") || tk.is("*") || tk.is("&") ||
                   tk.is(",") || tk.is("(") || tk.is(")")) ||
                 (is_identifier(tk) && kStatementKeywords.count(tk.text))) {
        break;
      }
    }
    if (!ok) continue;
    const std::size_t after = j + 1;
    const bool follows = after >= t.size() || t[after].is("(") || t[after].is("{") || t[after].is("::") ||
                         is_identifier(t[after]) || t[after].is(">") || t[after].is(",") || t[after].is(")") ||
                         t[after].is(";") || t[after].is("&") || t[after].is("*");
    if (follows) out.insert(marks.begin(), marks.end());
  }
  return out;
}

std::size_t matching_paren(const std::vector<Token>& t, std::size_t open) {
  int depth = 0;
  for (std::size_t k = open; k < t.size(); ++k) {
    if (t[k].is("(")) ++depth;
    else if (t[k].is(")") && --depth == 0) return k;
  }
  return t.size();
}

}  // namespace

std::vector<MutantSpec> mutants_for(const MethodDescriptor& method, std::string_view source) {
  if (method.span.end > source.size() || method.span.begin >= method.span.end) return {};
  auto toks = tokenize(source.substr(method.span.begin, method.span.size()));
  if (toks.size() < 2) return {};
  for (auto& tk : toks) {
    tk.begin += method.span.begin;
    tk.end += method.span.begin;
  }
  // drop the outer braces
  std::vector<Token> body(toks.begin() + 1, toks.end() - 1);
  const auto templ = template_brackets(body);

  std::vector<MutantSpec> out;
  auto add = [&](MutationOperator op, std::size_t begin, std::size_t end, std::string replacement) {
    out.push_back({method.id, op, {begin, end}, std::move(replacement)});
  };
  auto add_token = [&](MutationOperator op, const Token& tk, std::string replacement) {
    add(op, tk.begin, tk.end, std::move(replacement));
  };

  for (std::size_t i = 0; i < body.size(); ++i) {
    const Token& tk = body[i];
    if (tk.kind != TokenKind::punct) continue;
    const bool binary = i > 0 && ends_operand(body[i - 1]);
    const auto& s = tk.text;

    if ((s == "<" || s == ">" || s == "<=" || s == ">=") && !templ.count(i) && binary) {
      static const std::map<std::string, std::string> negate = {{"<", ">="}, {">", "<="}, {"<=", ">"}, {">=", "<"}};
      static const std::map<std::string, std::string> boundary = {{"<", "<="}, {"<=", "<"}, {">", ">="}, {">=", ">"}};
      add_token(MutationOperator::negate_conditional, tk, negate.at(s));
      add_token(MutationOperator::conditional_boundary, tk, boundary.at(s));
    } else if ((s == "==" || s == "!=") && binary) {
      add_token(MutationOperator::negate_conditional, tk, s == "==" ? "!=" : "==");
    } else if ((s == "+" || s == "-" || s == "*" || s == "/" || s == "%") && binary) {
      static const std::map<std::string, std::string> arith = {
          {"+", "-"}, {"-", "+"}, {"*", "/"}, {"/", "*"}, {"%", "*"}};
      add_token(MutationOperator::arithmetic_replacement, tk, arith.at(s));
    } else if (s == "+=" || s == "-=" || s == "*=" || s == "/=") {
      static const std::map<std::string, std::string> compound = {
          {"+=", "-="}, {"-=", "+="}, {"*=", "/="}, {"/=", "*="}};
      add_token(MutationOperator::arithmetic_replacement, tk, compound.at(s));
    } else if (s == "++" || s == "--") {
      add_token(MutationOperator::increment_flip, tk, s == "++" ? "--" : "++");
    }
  }

  // return value mutation
  const auto cat = method.return_category;
  const bool mutable_return = cat == ReturnCategory::boolean || cat == ReturnCategory::integral ||
                              cat == ReturnCategory::character || cat == ReturnCategory::floating;
  if (mutable_return) {
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (!body[i].is("return")) continue;
      std::size_t j = i + 1;
      int depth = 0;
      while (j < body.size()) {
        if (body[j].is("(") || body[j].is("[") || body[j].is("{")) ++depth;
        else if (body[j].is(")") || body[j].is("]") || body[j].is("}")) --depth;
        else if (body[j].is(";") && depth == 0) break;
        ++j;
      }
      if (j >= body.size() || j == i + 1) continue;
      const auto begin = body[i + 1].begin, end = body[j - 1].end;
      const std::string expr(source.substr(begin, end - begin));
      std::string repl;
      if (cat == ReturnCategory::boolean) repl = "!(" + expr + ")";
      else if (cat == ReturnCategory::floating) repl = "-((" + expr + ") + 1)";
      else repl = "((" + expr + ") == 0 ? 1 : 0)";
      add(MutationOperator::return_value_mutation, begin, end, repl);
    }
  }

  // remove statement-level calls: name ( ... ) ;  with optional member/scope chains
  for (std::size_t i = 0; i < body.size(); ++i) {
    const bool stmt_start = i == 0 || body[i - 1].is("{") || body[i - 1].is(";") || body[i - 1].is("}");
    if (!stmt_start || !is_identifier(body[i]) || kStatementKeywords.count(body[i].text)) continue;
    std::size_t j = i + 1;
    while (j + 1 < body.size() && (body[j].is(".") || body[j].is("->") || body[j].is("::")) &&
           is_identifier(body[j + 1]))
      j += 2;
    if (j >= body.size() || !body[j].is("(")) continue;
    const std::size_t close = matching_paren(body, j);
    if (close + 1 >= body.size() || !body[close + 1].is(";")) continue;
    add(MutationOperator::remove_call, body[i].begin, body[close + 1].end, "(void)0;");
  }

  std::sort(out.begin(), out.end(), [](const MutantSpec& a, const MutantSpec& b) {
    if (a.site.begin != b.site.begin) return a.site.begin < b.site.begin;
    if (a.mutation_operator != b.mutation_operator) return a.mutation_operator < b.mutation_operator;
    return a.replacement < b.replacement;
  });
  return out;
}

SourcePatch mutant_patch(const MethodInventory& inventory, const MutantSpec& mutant) {
  const auto& m = inventory.at(mutant.method_id);
  if (!m.span.contains(mutant.site)) throw ContractViolation("mutant site outside method " + m.id);
  SourcePatch p;
  p.file = m.file;
  p.span = mutant.site;
  p.replacement = mutant.replacement;
  p.method_id = m.id;
  p.label = std::string(to_string(mutant.mutation_operator));
  p.file_digest = inventory.file_digests.at(m.file);
  return p;
}

std::optional<double> method_mutation_score(const std::vector<bool>& detected) {
  if (detected.empty()) return std::nullopt;
  const auto killed = std::count(detected.begin(), detected.end(), true);
  return static_cast<double>(killed) / static_cast<double>(detected.size());
}

MutationResult summarize_mutants(const std::vector<MutantOutcome>& outcomes) {
  MutationResult r;
  std::map<std::string, std::vector<bool>> by_method;
  for (const auto& o : outcomes) {
    by_method[o.mutant.method_id];
    if (o.detection == Detection::compile_error) continue;
    const bool killed = is_detected(o.detection);
    r.per_mutant[o.mutant] = killed;
    by_method[o.mutant.method_id].push_back(killed);
  }
  for (const auto& [id, v] : by_method) r.per_method_score[id] = method_mutation_score(v);
  return r;
}

}  // namespace pseudotest
