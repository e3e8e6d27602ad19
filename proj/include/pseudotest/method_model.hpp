#pragma once

// Domain types for analyzable methods and the extreme transformations applied
// to them, plus the inclusion filter and the return-type -> variant table.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pseudotest {

struct MethodNode;

enum class ReturnCategory { unit, boolean, integral, floating, character, textual, reference, sequence };

inline constexpr ReturnCategory kAllReturnCategories[] = {
    ReturnCategory::unit,      ReturnCategory::boolean, ReturnCategory::integral,  ReturnCategory::floating,
    ReturnCategory::character, ReturnCategory::textual, ReturnCategory::reference, ReturnCategory::sequence};

/// How the declared return type carries its value; drives how a neutral
/// value is rendered for the reference row.
enum class ReturnForm { value, pointer, reference };

enum class Visibility { public_api, internal };

struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool contains(const SourceSpan& other) const noexcept { return begin <= other.begin && other.end <= end; }
  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

struct StructuralFlags {
  bool is_getter = false;
  bool is_setter = false;
  bool is_constant_return = false;
  bool is_empty_unit = false;
  bool is_deprecated = false;
  bool is_generated = false;
  bool is_hash_protocol = false;

  friend bool operator==(const StructuralFlags&, const StructuralFlags&) = default;
};

struct MethodDescriptor {
  std::string id;
  std::string file;  // relative to the project root, '/' separated
  SourceSpan span;   // the body, braces included
  ReturnCategory return_category = ReturnCategory::unit;
  StructuralFlags flags;
  Visibility visibility = Visibility::public_api;

  std::string name;
  std::string qualified_name;
  int arity = 0;
  std::string return_type;  // declared type as written, whitespace-normalized
  ReturnForm return_form = ReturnForm::value;
  bool is_constexpr = false;

  friend bool operator==(const MethodDescriptor&, const MethodDescriptor&) = default;
};

enum class TransformationKind { strip_body, fixed_return };

enum class ConstantTag {
  true_val,
  false_val,
  int_zero,
  int_one,
  float_zero,
  float_tenth,
  char_space,
  char_A,
  string_empty,
  string_A,
  null_ref,
  empty_sequence
};

struct TransformationSpec {
  TransformationKind kind = TransformationKind::strip_body;
  std::optional<ConstantTag> constant_tag;

  static TransformationSpec strip_body() { return {}; }
  static TransformationSpec fixed_return(ConstantTag tag) { return {TransformationKind::fixed_return, tag}; }

  /// Stable tag used in reports: "strip_body" or the constant tag name.
  std::string name() const;
  static TransformationSpec from_name(std::string_view name);

  friend bool operator==(const TransformationSpec&, const TransformationSpec&) = default;
};

enum class ExclusionReason {
  not_covered,
  getter_or_setter,
  constant_return,
  empty_unit,
  deprecated,
  generated,
  hash_protocol,
  constructor_or_initializer,
  user_filtered
};

struct InclusionDecision {
  bool included = true;
  std::optional<ExclusionReason> exclusion_reason;

  static InclusionDecision include() { return {}; }
  static InclusionDecision exclude(ExclusionReason why) { return {false, why}; }
  friend bool operator==(const InclusionDecision&, const InclusionDecision&) = default;
};

enum class ClassificationLabel { pseudo_tested, required, not_covered, excluded, unassessable };

struct Classification {
  ClassificationLabel label = ClassificationLabel::unassessable;
  std::optional<std::string> reason;
  friend bool operator==(const Classification&, const Classification&) = default;
};

std::string_view to_string(ReturnCategory);
std::string_view to_string(ConstantTag);
std::string_view to_string(ExclusionReason);
std::string_view to_string(ClassificationLabel);
std::string_view to_string(Visibility);
std::string_view to_string(ReturnForm);

ReturnCategory return_category_from_string(std::string_view);
ConstantTag constant_tag_from_string(std::string_view);
ExclusionReason exclusion_reason_from_string(std::string_view);
ClassificationLabel classification_label_from_string(std::string_view);
Visibility visibility_from_string(std::string_view);
ReturnForm return_form_from_string(std::string_view);

/// True when `tag` is one of the constants used for `category`.
bool admissible(ConstantTag tag, ReturnCategory category);
bool admissible(const TransformationSpec& spec, ReturnCategory category);

/// Extreme variants for a return category, in table order.
std::vector<TransformationSpec> transformations_for(ReturnCategory category);

/// Flags computed from syntax only. Throws StructuralError on a malformed node.
StructuralFlags structural_flags(const MethodNode& node);

/// The covered/of-interest predicate. Coverage is checked first, then flags
/// in the fixed order hash_protocol, getter_or_setter, constant_return,
/// empty_unit, deprecated, generated.
InclusionDecision is_method_under_analysis(const MethodDescriptor& descriptor, bool covered);

Classification classification_for_exclusion(ExclusionReason reason);

}  // namespace pseudotest
