#ifndef TMOTIVE_ERRORS_HPP
#define TMOTIVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tmotive {

// Exit-code buckets used by the CLI: 1 = verification failed, 2 = usage,
// 3 = computational error (divergence, poles, failed decompositions, ...).
enum class errc { verification = 1, usage = 2, computational = 3 };

class error : public std::runtime_error {
public:
    error(errc c, const std::string& what) : std::runtime_error(what), code_(c) {}
    errc code() const { return code_; }

private:
    errc code_;
};

#define TMOTIVE_DEFINE_ERROR(name)                                          \
    struct name : error {                                                   \
        explicit name(const std::string& w) : error(errc::computational, w) {} \
    }

TMOTIVE_DEFINE_ERROR(zero_division);
TMOTIVE_DEFINE_ERROR(negative_twist);
TMOTIVE_DEFINE_ERROR(pole_at_evaluation_point);
TMOTIVE_DEFINE_ERROR(divergent_evaluation);
TMOTIVE_DEFINE_ERROR(non_convergent);
TMOTIVE_DEFINE_ERROR(divergent_series);
TMOTIVE_DEFINE_ERROR(decomposition_failure);
TMOTIVE_DEFINE_ERROR(not_a_functional_equation_solution);
TMOTIVE_DEFINE_ERROR(pole_order_too_high);
TMOTIVE_DEFINE_ERROR(unsupported);
TMOTIVE_DEFINE_ERROR(inconsistent_bases);
TMOTIVE_DEFINE_ERROR(non_polynomial_basis);

#undef TMOTIVE_DEFINE_ERROR

struct usage_error : error {
    explicit usage_error(const std::string& w) : error(errc::usage, w) {}
};

}  // namespace tmotive

#endif
