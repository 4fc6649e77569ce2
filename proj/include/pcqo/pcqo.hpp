#pragma once

#include "pcqo/error.hpp"
#include "pcqo/fock.hpp"
#include "pcqo/gates.hpp"
#include "pcqo/boson_polynomial.hpp"
#include "pcqo/pool.hpp"
#include "pcqo/problems.hpp"
#include "pcqo/variational.hpp"
#include "pcqo/qaoa.hpp"
#include "pcqo/config.hpp"
#include "pcqo/bench.hpp"
