#ifndef K3BPS_ERRORS_HPP
#define K3BPS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace k3bps {

struct ZeroLeadingTerm : std::domain_error {
    explicit ZeroLeadingTerm(const std::string& m) : std::domain_error(m) {}
};
struct NonzeroConstantTerm : std::domain_error {
    explicit NonzeroConstantTerm(const std::string& m) : std::domain_error(m) {}
};
struct OutOfCutoff : std::domain_error {
    explicit OutOfCutoff(const std::string& m) : std::domain_error(m) {}
};
struct ZeroScale : std::domain_error {
    explicit ZeroScale(const std::string& m) : std::domain_error(m) {}
};
struct DimensionMismatch : std::domain_error {
    explicit DimensionMismatch(const std::string& m) : std::domain_error(m) {}
};
struct NonUnitClass : std::domain_error {
    explicit NonUnitClass(const std::string& m) : std::domain_error(m) {}
};
struct NotAnIsometry : std::domain_error {
    explicit NotAnIsometry(const std::string& m) : std::domain_error(m) {}
};
struct NonIntegralVector : std::domain_error {
    explicit NonIntegralVector(const std::string& m) : std::domain_error(m) {}
};
struct OddSelfIntersection : std::domain_error {
    explicit OddSelfIntersection(const std::string& m) : std::domain_error(m) {}
};
struct OddPairing : std::domain_error {
    explicit OddPairing(const std::string& m) : std::domain_error(m) {}
};
struct CutoffExceeded : std::domain_error {
    explicit CutoffExceeded(const std::string& m) : std::domain_error(m) {}
};
struct NonzeroResidual : std::logic_error {
    explicit NonzeroResidual(const std::string& m) : std::logic_error(m) {}
};
struct MixedClass : std::domain_error {
    explicit MixedClass(const std::string& m) : std::domain_error(m) {}
};
struct ZeroRank : std::domain_error {
    explicit ZeroRank(const std::string& m) : std::domain_error(m) {}
};
struct DegenerateClass : std::domain_error {
    explicit DegenerateClass(const std::string& m) : std::domain_error(m) {}
};
struct NotInSpan : std::domain_error {
    explicit NotInSpan(const std::string& m) : std::domain_error(m) {}
};

} // namespace k3bps

#endif
