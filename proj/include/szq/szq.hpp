#pragma once

#include "szq/analysis.hpp"
#include "szq/cauchy.hpp"
#include "szq/corpus.hpp"
#include "szq/json_io.hpp"
#include "szq/matrix_function.hpp"
#include "szq/potential.hpp"
#include "szq/quadrature.hpp"
#include "szq/spectral.hpp"
#include "szq/test_function.hpp"
#include "szq/types.hpp"
#include "szq/verify.hpp"
