#pragma once

#include "paraprod/dyadic_tree.hpp"
#include "paraprod/experiments.hpp"
#include "paraprod/haar_space.hpp"
#include "paraprod/json_io.hpp"
#include "paraprod/operator.hpp"
#include "paraprod/opnorm.hpp"
#include "paraprod/paraproducts.hpp"
#include "paraprod/symbol.hpp"
#include "paraprod/transplant.hpp"
