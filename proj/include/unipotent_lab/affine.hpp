#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "unipotent_lab/bundle.hpp"
#include "unipotent_lab/gln.hpp"

namespace ulab {

/// (t, sigma) standing for diag(pi^t) * Perm(sigma), Perm(sigma) e_j = e_{sigma(j)}.
struct ExtAffineWeylElem {
  std::vector<int> t;
  Permutation sigma;

  static ExtAffineWeylElem identity(int n);
  static ExtAffineWeylElem translation(std::vector<int> t);
  static ExtAffineWeylElem finite(Permutation sigma);
  int n() const { return static_cast<int>(t.size()); }
  ExtAffineWeylElem operator*(const ExtAffineWeylElem& o) const;
  ExtAffineWeylElem inverse() const;
  bool operator==(const ExtAffineWeylElem&) const = default;
  auto operator<=>(const ExtAffineWeylElem&) const = default;
  nlohmann::json to_json() const;
  std::string str() const;
};

/// s_1..s_{n-1} are i = 1..n-1; i = 0 is the affine reflection swapping e_0, e_{n-1} with pi^{-1}, pi.
ExtAffineWeylElem affine_simple_reflection(int n, int i);
/// Length-zero generator e_j -> e_{j-1}, e_0 -> pi e_{n-1}; normalises the Iwahori.
ExtAffineWeylElem rotation(int n);

/// sum_{a<b} |t_a - t_b + [sigma^{-1}(a) > sigma^{-1}(b)]|
int awg_length(const ExtAffineWeylElem& w);

/// All elements with translation entries in [lo, hi].
std::vector<ExtAffineWeylElem> box_elements(int n, int lo, int hi);

struct LengthCheck {
  std::size_t checked = 0;
  std::vector<ExtAffineWeylElem> mismatches;
  bool bfs_bound_exceeded = false;  // some box element was not reached; those use the formula only
  bool ok() const { return mismatches.empty() && !bfs_bound_exceeded; }
};
/// Word lengths in the affine reflections and the rotation by 0-1 BFS over a padded box,
/// compared with awg_length on translation entries in [-box, box].
LengthCheck cross_validate_lengths(int n, int box = 2, int padding = 2);

struct CosetFactorization {
  Permutation w_f;
  ExtAffineWeylElem w0;
};
/// w = w_f * w0 with w0 the minimal length element of W_f w.
CosetFactorization min_coset_factorization(const ExtAffineWeylElem& w);
bool is_minimal_in_coset(const ExtAffineWeylElem& w);

/// Same labels as the standard parabolics.
std::vector<Composition> standard_parahoric_labels(int n);

/// Minimal coset representatives with translation entries in [0, m-1].
std::vector<ExtAffineWeylElem> admissible_minimal_elements(int n, int m);

/// M_n(F_q[t]/t^m) with the reductions of the Iwahori, of K+ = 1 + t M_n, and of GL_n(O).
class TruncatedGroup {
 public:
  using Mat = std::vector<Elem>;  // entry (i, j), t-degree k at (i * n + j) * m + k

  TruncatedGroup(int n, FieldPtr fq, int m);

  int n() const { return n_; }
  int m() const { return m_; }
  const FieldPtr& field() const { return fq_; }
  std::uint64_t q() const { return fq_->order(); }

  Mat identity() const;
  Mat mul(const Mat& a, const Mat& b) const;
  Mat inverse(const Mat& a) const;  // throws if not invertible
  bool invertible(const Mat& a) const;
  Matrix reduce(const Mat& a) const;  // mod t
  bool in_iwahori(const Mat& a) const;
  bool in_kplus(const Mat& a) const;
  std::uint64_t key(const Mat& a) const;
  Mat from_matrix(const Matrix& c) const;  // constant embedding
  /// Monomial matrix diag(t^{t_i}) Perm(sigma); entries must lie in [0, m-1].
  Mat from_weyl(const ExtAffineWeylElem& w) const;

  /// |GL_n(F_q)| q^{(m-1) n^2}
  std::uint64_t order() const;
  std::vector<Mat> kplus_generators() const;
  std::vector<Mat> iwahori_generators() const;
  std::vector<Mat> group_generators() const;

  /// Subgroup generated by gens, by closure from the identity. ScaleError past `bound`.
  std::vector<Mat> closure(const std::vector<Mat>& gens, std::uint64_t bound) const;
  /// {l x r : l in <left>, r in <right>} by closing x under both sides.
  std::unordered_set<std::uint64_t> double_orbit(const Mat& x, const std::vector<Mat>& left,
                                                 const std::vector<Mat>& right, std::uint64_t bound) const;

 private:
  int n_;
  FieldPtr fq_;
  int m_;
};

inline constexpr std::uint64_t kTruncatedBound = 100000;

struct SetIdentityReport {
  ExtAffineWeylElem w0;
  bool equal = false;
  std::size_t iwi_size = 0;
  std::size_t kwi_size = 0;
};
/// Materialises I w0 I and K+ w0 I. Rejects non-minimal or non-admissible w0 (invalid_argument).
SetIdentityReport shadow_set_identity(const TruncatedGroup& g, const ExtAffineWeylElem& w0,
                                      std::uint64_t bound = kTruncatedBound);

struct IndexReport {
  std::uint64_t index = 0;
  bool p_power = false;
};
/// [K+ : {k in K+ : k x in x I}] for x = i w, the truncated form of K+ cap (iw) I (iw)^{-1}.
IndexReport index_invertibility_check(const TruncatedGroup& g, const ExtAffineWeylElem& w,
                                      const TruncatedGroup::Mat& i, std::uint64_t bound = kTruncatedBound);

struct AffineReport {
  int n = 0;
  std::uint32_t q = 0;
  int m = 0;
  std::uint64_t group_order = 0;
  LengthCheck lengths;
  std::vector<SetIdentityReport> identities;
  std::vector<std::uint64_t> indices;
  bool indices_all_p_powers = false;
  bool all_equal() const;
  bool ok() const;
  nlohmann::json to_json() const;
};
/// Length cross-check, the set identity for every admissible minimal w0, and indices for
/// every admissible w paired with `samples` random Iwahori elements.
AffineReport run_affine_suite(int n, std::uint32_t q, int m, std::uint64_t seed, int samples = 10);

}  // namespace ulab
