#pragma once
#include <stdexcept>
#include <string>

namespace rw {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define RW_ERROR_TYPE(Name) \
    struct Name : Error { explicit Name(const std::string& m) : Error(#Name ": " + m) {} }

RW_ERROR_TYPE(DomainError);
RW_ERROR_TYPE(NotRepulsive);
RW_ERROR_TYPE(DecayMismatch);
RW_ERROR_TYPE(DivergentTail);
RW_ERROR_TYPE(StiffnessFailure);
RW_ERROR_TYPE(OrderTooLow);
RW_ERROR_TYPE(FitDegenerate);
RW_ERROR_TYPE(BandTruncation);
RW_ERROR_TYPE(GridMismatch);
RW_ERROR_TYPE(CFLViolation);
RW_ERROR_TYPE(Blowup);
RW_ERROR_TYPE(VariantInadmissible);
RW_ERROR_TYPE(PotentialsDifferFar);
RW_ERROR_TYPE(RegionOutsideHistory);
RW_ERROR_TYPE(UnderResolved);
RW_ERROR_TYPE(NonConvergentFit);
RW_ERROR_TYPE(ConfigInvalid);

#undef RW_ERROR_TYPE

} // namespace rw
