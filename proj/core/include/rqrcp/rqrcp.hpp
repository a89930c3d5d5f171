#pragma once

#include "rqrcp/analysis.hpp"
#include "rqrcp/counters.hpp"
#include "rqrcp/errors.hpp"
#include "rqrcp/factorization.hpp"
#include "rqrcp/householder.hpp"
#include "rqrcp/kernels.hpp"
#include "rqrcp/matrix.hpp"
#include "rqrcp/norms.hpp"
#include "rqrcp/permutation.hpp"
#include "rqrcp/qrcp.hpp"
#include "rqrcp/random.hpp"
#include "rqrcp/randomized.hpp"
#include "rqrcp/svd.hpp"
#include "rqrcp/synthetic.hpp"
#include "rqrcp/truncated.hpp"
