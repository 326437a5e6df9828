#ifndef ENTROPIC_FAMILIES_HPP
#define ENTROPIC_FAMILIES_HPP

#include <string>
#include <variant>
#include <vector>

#include "entropic/data_model.hpp"

namespace entropic {

enum class FamilyKind { gaussian, biexp, bernoulli };

struct GaussianParams {
    double mu = 0.0;
    double sigma2 = 1.0;
};

// Bi-sided asymmetrical exponential: weight p on an exponential tail rising
// to the right anchor a_right, weight 1-p on a mirrored tail left of a_left,
// zero density on the open gap (a_left, a_right).
struct BiExpParams {
    double p = 0.5;
    double a_left = 0.0;
    double a_right = 0.0;
    double lambda_left = 1.0;
    double lambda_right = 1.0;
};

struct BernoulliParams {
    double mu0 = 0.5;
    double mu1 = 0.5;
};

using FamilyParams = std::variant<GaussianParams, BiExpParams, BernoulliParams>;

// A density family plus its fitting hyperparameters. sigma2_floor is an
// absolute variance floor; bind_family() scales it to a sample's range.
struct Family {
    FamilyKind kind = FamilyKind::gaussian;
    double alpha = 0.005;
    double lambda_cap = 1e8;
    double sigma2_floor = 1e-300;
    double sigma2_floor_scale = 1e-12;
};

// Sets the gaussian variance floor to scale * range(w)^2 + 1e-300. The floor
// is tied to the full sample, not to per-class subsamples, so that class
// shrinkage cannot lower it.
Family bind_family(FamilyKind kind, const WeightedSample& w,
                   double alpha = 0.005, double lambda_cap = 1e8,
                   double sigma2_floor_scale = 1e-12);

FamilyKind family_kind_from_id(const std::string& id);
std::string family_id(FamilyKind kind);

// Per-class weighted distribution handed to the M-step. Weights need not be
// normalized; fits are invariant under uniform rescaling.
struct WeightedSubsample {
    std::vector<double> values;
    std::vector<double> weights;
    double mass = 0.0;
};

// log g_theta(z); -inf exactly where the density vanishes (bi-exp gap,
// bernoulli off-support or zero-mass point).
double log_density(const Family& family, const FamilyParams& params, double z);

// log_density with the per-parameter constants hoisted; use for tight loops
// over many z at fixed parameters.
class PreparedLogDensity {
  public:
    PreparedLogDensity(const Family& family, const FamilyParams& params);
    double operator()(double z) const;

  private:
    FamilyKind kind_;
    // gaussian: a_ = -log(2 pi s2)/2, b_ = 1/(2 s2), c_ = mu
    // biexp:    a_ = log(p lr), b_ = log((1-p) ll), and the raw params
    // bernoulli: a_ = log mu0, b_ = log mu1
    double a_ = 0.0, b_ = 0.0, c_ = 0.0;
    double a_left_ = 0.0, a_right_ = 0.0, ll_ = 0.0, lr_ = 0.0;
};

struct FitOutcome {
    FamilyParams params;
    double cross_entropy = 0.0;  // attained min of H(G || g_theta)
    bool degenerate = false;     // variance floor or rate cap bound the fit
};

// Weighted MLE: argmin_theta of -sum_z (w_z/mass) log g_theta(z) and the
// attained value. Throws on an empty class (mass <= 0).
FitOutcome fit_weighted(const Family& family, const WeightedSubsample& sub);

// Neutral parameters for classes with nu(x) == 0.
FamilyParams placeholder_params(const Family& family);

}  // namespace entropic

#endif
