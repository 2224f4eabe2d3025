#pragma once

#include "charmoment/bounds.hpp"
#include "charmoment/characters.hpp"
#include "charmoment/constants.hpp"
#include "charmoment/errors.hpp"
#include "charmoment/field.hpp"
#include "charmoment/harness.hpp"
#include "charmoment/moments.hpp"
#include "charmoment/poly.hpp"
