#pragma once

#include "bergman/core.hpp"
#include "bergman/summation.hpp"
#include "bergman/gauss.hpp"
#include "bergman/reinhardt_profile.hpp"
#include "bergman/domains.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/reinhardt.hpp"
#include "bergman/berezin.hpp"
#include "bergman/hartogs.hpp"
#include "bergman/opnorm.hpp"
#include "bergman/report.hpp"
