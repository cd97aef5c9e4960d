#pragma once
#include "boost.hpp"
#include "dataset.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "lars.hpp"
#include "linalg.hpp"
#include "logistic.hpp"
#include "random.hpp"
#include "selection.hpp"
#include "serialize.hpp"
#include "shooting.hpp"
