#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace relreg {

//! One right-censored record: covariate, observed time min(T, C) and the
//! non-censoring indicator (1 = the lifetime T was observed).
struct Observation
{
  double x;
  double y;
  int delta;

  bool operator==(const Observation&) const = default;
};

//! Ordered, non-empty collection of observations. Insertion order is kept;
//! every estimator is invariant under permutations of the rows.
class CensoredDataset
{
public:
  explicit CensoredDataset(std::vector<Observation> observations);

  std::size_t size() const noexcept { return observations_.size(); }
  const Observation& operator[](std::size_t i) const { return observations_[i]; }
  std::span<const Observation> observations() const noexcept
  {
    return observations_;
  }

  auto begin() const noexcept { return observations_.begin(); }
  auto end() const noexcept { return observations_.end(); }

  bool operator==(const CensoredDataset&) const = default;

private:
  std::vector<Observation> observations_;
};

//! Reference regression curve used by simulated data (identifier plus
//! parameters). Known identifiers: "linear" (alpha, beta), "parabolic",
//! "sinusoidal", "exponential".
struct TrueCurve
{
  std::string id;
  std::vector<double> params;

  double operator()(double x) const;
};

//! Simulated dataset together with the latent lifetimes and censoring
//! times that produced it.
struct LabeledDataset
{
  CensoredDataset dataset;
  std::vector<double> true_t;
  std::vector<double> true_c;
  std::optional<TrueCurve> true_curve;
  std::size_t rejected_draws = 0;  //!< (X, eps) pairs redrawn because T <= 0
};

CensoredDataset load_csv(const std::string& path);

//! Parses CSV text; `source` is only used in error messages.
CensoredDataset parse_csv(const std::string& text,
                          const std::string& source = "<memory>");

std::string to_csv(const CensoredDataset& dataset);
void save_csv(const CensoredDataset& dataset, const std::string& path);

//! Fraction of rows with delta = 0.
double censoring_rate(const CensoredDataset& dataset);

} // namespace relreg
