#pragma once

#include "qpac/channels.hpp"
#include "qpac/discrimination.hpp"
#include "qpac/errors.hpp"
#include "qpac/experiment.hpp"
#include "qpac/generators.hpp"
#include "qpac/io.hpp"
#include "qpac/learners.hpp"
#include "qpac/matrix.hpp"
#include "qpac/qmath.hpp"
#include "qpac/rng.hpp"
#include "qpac/verify.hpp"
