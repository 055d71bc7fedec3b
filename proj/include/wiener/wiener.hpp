#pragma once

#include "wiener/group.hpp"
#include "wiener/linalg.hpp"
#include "wiener/envelope.hpp"
#include "wiener/kernel.hpp"
#include "wiener/covariance.hpp"
#include "wiener/lab.hpp"
#include "wiener/generate.hpp"
#include "wiener/checks.hpp"
#include "wiener/io.hpp"
