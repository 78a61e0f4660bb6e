#ifndef CHARSUM_CHARSUM_TESTING_H
#define CHARSUM_CHARSUM_TESTING_H

#include "charsum.h"

#ifdef __cplusplus
extern "C" {
#endif

/* Perturbs the reference values of the asserted identities so that the
   exit-code path for ASSERT failures can be exercised. Returns
   CS_INVALID_ARGUMENT when the library was built without test hooks. */
CS_API cs_status cs_testing_set_oracle_fault(cs_context* ctx, int enabled);
CS_API int cs_testing_hooks_available(void);

#ifdef __cplusplus
}
#endif

#endif
