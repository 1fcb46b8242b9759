#pragma once

#include <stepsum/analytic.hpp>
#include <stepsum/csv.hpp>
#include <stepsum/identities.hpp>
#include <stepsum/jump_series.hpp>
#include <stepsum/kernel.hpp>
#include <stepsum/numeric.hpp>
#include <stepsum/primes.hpp>
#include <stepsum/quadrature.hpp>
#include <stepsum/report.hpp>
#include <stepsum/verify.hpp>
