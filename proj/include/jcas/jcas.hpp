#ifndef JCAS_JCAS_HPP_
#define JCAS_JCAS_HPP_

#include "jcas/binary_example.hpp"
#include "jcas/channel.hpp"
#include "jcas/errors.hpp"
#include "jcas/estimators.hpp"
#include "jcas/info.hpp"
#include "jcas/regions.hpp"
#include "jcas/simulator.hpp"

#endif // JCAS_JCAS_HPP_
