#pragma once

#include "catalysis/core.hpp"
#include "catalysis/statekit/channel.hpp"
#include "catalysis/statekit/composite.hpp"
#include "catalysis/statekit/density_matrix.hpp"
#include "catalysis/statekit/entropy.hpp"
#include "catalysis/statekit/layout.hpp"
#include "catalysis/statekit/probability_vector.hpp"
#include "catalysis/majorization/majorization.hpp"
#include "catalysis/majorization/permutation.hpp"
#include "catalysis/majorization/permutation_mixture.hpp"
#include "catalysis/majorization/schur_horn.hpp"
#include "catalysis/typicality/majorized_target.hpp"
#include "catalysis/typicality/typicality.hpp"
#include "catalysis/report.hpp"
#include "catalysis/classical/catalyst.hpp"
#include "catalysis/quantum/dilation.hpp"
#include "catalysis/quantum/catalyst.hpp"
#include "catalysis/thermo/thermo.hpp"
