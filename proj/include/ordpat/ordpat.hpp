#pragma once

#include "ordpat/coeffs.hpp"
#include "ordpat/cov.hpp"
#include "ordpat/errors.hpp"
#include "ordpat/estimators.hpp"
#include "ordpat/fft.hpp"
#include "ordpat/fgn.hpp"
#include "ordpat/hurst.hpp"
#include "ordpat/linalg.hpp"
#include "ordpat/montecarlo.hpp"
#include "ordpat/parallel.hpp"
#include "ordpat/pattern.hpp"
#include "ordpat/rng.hpp"
#include "ordpat/series_io.hpp"
