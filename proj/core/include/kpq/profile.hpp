#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kpq/matrix.hpp"

namespace kpq {

/// Envelope |fhat(t)| <= prefactor e^{-rate |t|} beyond a tabulated grid.
struct TailSpec {
  double prefactor = 0.0;
  double rate = 0.0;
};

/// f(x) = (1/2pi) int fhat(t) e^{itx} dt, represented by a closed-form
/// fhat (or a tabulated one) plus a certified tail functional.
///   gaussian   fhat = amp e^{-t^2/sigma^2}
///   box        fhat = amp 1_{[-T,T]}
///   hat        fhat = amp (1 - |t|/T)_+
///   tabulated  linear interpolation on a symmetric grid, user tail envelope
///   sum        sum_i w_i e^{-i s_i t} fhat_i(t), i.e. f = sum w_i f_i(x - s_i)
///   product    (f g)^ = (fhat * ghat) / 2pi
class FourierProfile {
 public:
  enum class Kind { gaussian, box, hat, tabulated, sum, product };

  struct Term;

  /// The zero profile.
  FourierProfile();

  static FourierProfile gaussian(double sigma, double amplitude = 1.0);
  static FourierProfile box(double half_width, double amplitude = 1.0);
  static FourierProfile hat(double half_width, double amplitude = 1.0);
  static FourierProfile tabulated(std::vector<double> grid, std::vector<Complex> values, std::optional<TailSpec> tail);
  static FourierProfile sum(std::vector<Term> terms);
  /// Closed form for gaussian x gaussian (a gaussian) and gaussian x box;
  /// numeric convolution otherwise.
  static FourierProfile product(const FourierProfile& f, const FourierProfile& g);
  /// f = c1 G(x-1) + c2 G(x), G the spatial gaussian of width sigma, with
  /// f(0) = 0 and f(1) = 1 exactly.
  static FourierProfile unit_at_one(double sigma);

  [[nodiscard]] Kind kind() const;
  [[nodiscard]] std::string kind_name() const;

  [[nodiscard]] Complex fhat(double t) const;
  /// Spatial function, closed form where available.
  [[nodiscard]] Complex f(double x) const;

  /// Certified bound on int_{|t|>T} |fhat(t)| e^{R|t|} dt; +inf when the
  /// envelope does not dominate e^{R|t|}.
  [[nodiscard]] double tail(double cutoff, double rate) const;
  /// Points where fhat is not analytic (kinks, jumps, grid nodes).
  [[nodiscard]] std::vector<double> breakpoints() const;
  /// Half-width of the support of fhat, +inf if not compact.
  [[nodiscard]] double support() const;

  /// Bound on |fhat| over the complex rectangle [lo, hi] x [-b, b] using the
  /// analytic continuation of the piece living on (lo, hi). Empty when no
  /// bound is known (numeric products).
  [[nodiscard]] std::optional<double> piece_bound(double lo, double hi, double b) const;

  /// fhat(-t) == conj(fhat(t)) on the breakpoints and a probe grid.
  [[nodiscard]] bool is_real_valued() const;

  [[nodiscard]] nlohmann::json to_json() const;
  static FourierProfile from_json(const nlohmann::json& j);

  struct Node;

 private:
  explicit FourierProfile(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct FourierProfile::Term {
  Complex weight = 1.0;
  double shift = 0.0;
  FourierProfile profile;
};

}  // namespace kpq
