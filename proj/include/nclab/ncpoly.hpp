#pragma once

#include "nclab/ncpoly/builders.hpp"
#include "nclab/ncpoly/calculus.hpp"
#include "nclab/ncpoly/io.hpp"
#include "nclab/ncpoly/poly.hpp"
#include "nclab/ncpoly/word.hpp"
