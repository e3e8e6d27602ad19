#include "pseudotest/method_model.hpp"

#include <array>
#include <utility>

#include "pseudotest/errors.hpp"
#include "pseudotest/source_syntax.hpp"

namespace pseudotest {
namespace {

template <typename Enum, std::size_t N>
using NameTable = std::array<std::pair<Enum, std::string_view>, N>;

constexpr NameTable<ReturnCategory, 8> kCategoryNames = {{{ReturnCategory::unit, "unit"},
                                                          {ReturnCategory::boolean, "boolean"},
                                                          {ReturnCategory::integral, "integral"},
                                                          {ReturnCategory::floating, "floating"},
                                                          {ReturnCategory::character, "character"},
                                                          {ReturnCategory::textual, "textual"},
                                                          {ReturnCategory::reference, "reference"},
                                                          {ReturnCategory::sequence, "sequence"}}};

constexpr NameTable<ConstantTag, 12> kConstantNames = {{{ConstantTag::true_val, "true_val"},
                                                        {ConstantTag::false_val, "false_val"},
                                                        {ConstantTag::int_zero, "int_zero"},
                                                        {ConstantTag::int_one, "int_one"},
                                                        {ConstantTag::float_zero, "float_zero"},
                                                        {ConstantTag::float_tenth, "float_tenth"},
                                                        {ConstantTag::char_space, "char_space"},
                                                        {ConstantTag::char_A, "char_A"},
                                                        {ConstantTag::string_empty, "string_empty"},
                                                        {ConstantTag::string_A, "string_A"},
                                                        {ConstantTag::null_ref, "null_ref"},
                                                        {ConstantTag::empty_sequence, "empty_sequence"}}};

constexpr NameTable<ExclusionReason, 9> kExclusionNames = {
    {{ExclusionReason::not_covered, "not_covered"},
     {ExclusionReason::getter_or_setter, "getter_or_setter"},
     {ExclusionReason::constant_return, "constant_return"},
     {ExclusionReason::empty_unit, "empty_unit"},
     {ExclusionReason::deprecated, "deprecated"},
     {ExclusionReason::generated, "generated"},
     {ExclusionReason::hash_protocol, "hash_protocol"},
     {ExclusionReason::constructor_or_initializer, "constructor_or_initializer"},
     {ExclusionReason::user_filtered, "user_filtered"}}};

constexpr NameTable<ClassificationLabel, 5> kLabelNames = {{{ClassificationLabel::pseudo_tested, "pseudo_tested"},
                                                            {ClassificationLabel::required, "required"},
                                                            {ClassificationLabel::not_covered, "not_covered"},
                                                            {ClassificationLabel::excluded, "excluded"},
                                                            {ClassificationLabel::unassessable, "unassessable"}}};

constexpr NameTable<Visibility, 2> kVisibilityNames = {
    {{Visibility::public_api, "public"}, {Visibility::internal, "non_public"}}};

constexpr NameTable<ReturnForm, 3> kFormNames = {
    {{ReturnForm::value, "value"}, {ReturnForm::pointer, "pointer"}, {ReturnForm::reference, "reference"}}};

template <typename Enum, std::size_t N>
std::string_view lookup_name(const NameTable<Enum, N>& table, Enum value) {
  for (const auto& [e, name] : table)
    if (e == value) return name;
  return "?";
}

template <typename Enum, std::size_t N>
Enum lookup_value(const NameTable<Enum, N>& table, std::string_view name, const char* what) {
  for (const auto& [e, n] : table)
    if (n == name) return e;
  throw ContractViolation(std::string("unknown ") + what + " '" + std::string(name) + "'");
}

bool is_literal(const Token& tk) {
  return tk.kind == TokenKind::number || tk.kind == TokenKind::string_literal ||
         tk.kind == TokenKind::char_literal || tk.is("true") || tk.is("false") || tk.is("nullptr");
}

// Length of a field reference at body[k]: `name` or `this->name`; 0 if none.
std::size_t field_reference(const std::vector<Token>& body, std::size_t k, const std::set<std::string>& fields) {
  if (k < body.size() && body[k].kind == TokenKind::identifier && fields.count(body[k].text)) return 1;
  if (k + 2 < body.size() && body[k].is("this") && body[k + 1].is("->") &&
      body[k + 2].kind == TokenKind::identifier && fields.count(body[k + 2].text))
    return 3;
  return 0;
}

// Length of a parameter reference at body[k]: `p`, `std::move(p)` or `move(p)`; 0 if none.
std::size_t parameter_reference(const std::vector<Token>& body, std::size_t k, const std::vector<Parameter>& params) {
  auto is_param = [&](std::size_t at) {
    if (at >= body.size() || body[at].kind != TokenKind::identifier) return false;
    for (const auto& p : params)
      if (!p.name.empty() && p.name == body[at].text) return true;
    return false;
  };
  if (is_param(k)) return 1;
  std::size_t j = k;
  if (j + 1 < body.size() && body[j].is("std") && body[j + 1].is("::")) j += 2;
  if (j + 3 < body.size() && body[j].is("move") && body[j + 1].is("(") && is_param(j + 2) && body[j + 3].is(")"))
    return j + 4 - k;
  return 0;
}

}  // namespace

std::string_view to_string(ReturnCategory v) { return lookup_name(kCategoryNames, v); }
std::string_view to_string(ConstantTag v) { return lookup_name(kConstantNames, v); }
std::string_view to_string(ExclusionReason v) { return lookup_name(kExclusionNames, v); }
std::string_view to_string(ClassificationLabel v) { return lookup_name(kLabelNames, v); }
std::string_view to_string(Visibility v) { return lookup_name(kVisibilityNames, v); }
std::string_view to_string(ReturnForm v) { return lookup_name(kFormNames, v); }

ReturnCategory return_category_from_string(std::string_view s) {
  return lookup_value(kCategoryNames, s, "return category");
}
ConstantTag constant_tag_from_string(std::string_view s) { return lookup_value(kConstantNames, s, "constant tag"); }
ExclusionReason exclusion_reason_from_string(std::string_view s) {
  return lookup_value(kExclusionNames, s, "exclusion reason");
}
ClassificationLabel classification_label_from_string(std::string_view s) {
  return lookup_value(kLabelNames, s, "classification");
}
Visibility visibility_from_string(std::string_view s) { return lookup_value(kVisibilityNames, s, "visibility"); }
ReturnForm return_form_from_string(std::string_view s) { return lookup_value(kFormNames, s, "return form"); }

std::string TransformationSpec::name() const {
  if (kind == TransformationKind::strip_body) return "strip_body";
  return std::string(to_string(*constant_tag));
}

TransformationSpec TransformationSpec::from_name(std::string_view name) {
  if (name == "strip_body") return strip_body();
  return fixed_return(constant_tag_from_string(name));
}

std::vector<TransformationSpec> transformations_for(ReturnCategory category) {
  using T = TransformationSpec;
  switch (category) {
    case ReturnCategory::unit:
      return {T::strip_body()};
    case ReturnCategory::boolean:
      return {T::fixed_return(ConstantTag::true_val), T::fixed_return(ConstantTag::false_val)};
    case ReturnCategory::integral:
      return {T::fixed_return(ConstantTag::int_zero), T::fixed_return(ConstantTag::int_one)};
    case ReturnCategory::floating:
      return {T::fixed_return(ConstantTag::float_zero), T::fixed_return(ConstantTag::float_tenth)};
    case ReturnCategory::character:
      return {T::fixed_return(ConstantTag::char_space), T::fixed_return(ConstantTag::char_A)};
    case ReturnCategory::textual:
      return {T::fixed_return(ConstantTag::string_empty), T::fixed_return(ConstantTag::string_A)};
    case ReturnCategory::reference:
      return {T::fixed_return(ConstantTag::null_ref)};
    case ReturnCategory::sequence:
      return {T::fixed_return(ConstantTag::empty_sequence)};
  }
  return {};
}

bool admissible(ConstantTag tag, ReturnCategory category) {
  for (const auto& spec : transformations_for(category))
    if (spec.constant_tag == tag) return true;
  return false;
}

bool admissible(const TransformationSpec& spec, ReturnCategory category) {
  const bool well_formed = (spec.kind == TransformationKind::strip_body) == !spec.constant_tag.has_value();
  if (!well_formed) return false;
  if (spec.kind == TransformationKind::strip_body) return category == ReturnCategory::unit;
  return admissible(*spec.constant_tag, category);
}

StructuralFlags structural_flags(const MethodNode& node) {
  if (node.name.empty() || node.body_span.begin >= node.body_span.end)
    throw StructuralError("malformed method node '" + node.qualified_name() + "'", node.body_span.begin,
                          node.body_span.end);

  StructuralFlags flags;
  const auto& body = node.body;
  const auto category = classify_return_type(node.return_type).category;

  if (node.owner_is_class) {
    // return <field>;
    if (body.size() >= 3 && body.front().is("return") && body.back().is(";")) {
      const std::size_t n = field_reference(body, 1, node.owner_fields);
      flags.is_getter = n > 0 && n + 2 == body.size();
    }
    // <field> = <param>;
    if (!flags.is_getter && body.size() >= 4 && body.back().is(";")) {
      const std::size_t lhs = field_reference(body, 0, node.owner_fields);
      if (lhs > 0 && body[lhs].is("=")) {
        const std::size_t rhs = parameter_reference(body, lhs + 1, node.params);
        flags.is_setter = rhs > 0 && lhs + 1 + rhs + 1 == body.size();
      }
    }
  }

  if (body.size() == 3 && body[0].is("return") && is_literal(body[1]) && body[2].is(";"))
    flags.is_constant_return = true;
  if (body.size() == 4 && body[0].is("return") && body[1].is("-") && body[2].kind == TokenKind::number &&
      body[3].is(";"))
    flags.is_constant_return = true;

  flags.is_empty_unit = category == ReturnCategory::unit && body.empty();
  flags.is_deprecated = node.deprecated;
  flags.is_generated = node.generated_file;
  flags.is_hash_protocol = node.name == "operator==" || node.name == "operator!=" || node.name == "operator<=>" ||
                           node.name == "hash_value" || node.name == "hash" ||
                           (node.name == "operator()" && node.in_hash_specialization);
  return flags;
}

InclusionDecision is_method_under_analysis(const MethodDescriptor& d, bool covered) {
  if (!covered) return InclusionDecision::exclude(ExclusionReason::not_covered);
  const auto& f = d.flags;
  if (f.is_hash_protocol) return InclusionDecision::exclude(ExclusionReason::hash_protocol);
  if (f.is_getter || f.is_setter) return InclusionDecision::exclude(ExclusionReason::getter_or_setter);
  if (f.is_constant_return) return InclusionDecision::exclude(ExclusionReason::constant_return);
  if (f.is_empty_unit) return InclusionDecision::exclude(ExclusionReason::empty_unit);
  if (f.is_deprecated) return InclusionDecision::exclude(ExclusionReason::deprecated);
  if (f.is_generated) return InclusionDecision::exclude(ExclusionReason::generated);
  return InclusionDecision::include();
}

Classification classification_for_exclusion(ExclusionReason reason) {
  if (reason == ExclusionReason::not_covered) return {ClassificationLabel::not_covered, std::nullopt};
  return {ClassificationLabel::excluded, std::string(to_string(reason))};
}

}  // namespace pseudotest
