#include "mollikit/rng.hpp"

#include "mollikit/special.hpp"

namespace mollikit {

double RandomStream::normal() { return special::normal_quantile(uniform()); }

double RandomStream::student_t4() { return special::student_t4_quantile(uniform()); }

}  // namespace mollikit
