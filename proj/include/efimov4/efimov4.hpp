#ifndef EFIMOV4_EFIMOV4_HPP
#define EFIMOV4_EFIMOV4_HPP

#include "efimov4/channels.hpp"
#include "efimov4/config.hpp"
#include "efimov4/eigen.hpp"
#include "efimov4/errors.hpp"
#include "efimov4/gamma.hpp"
#include "efimov4/hyp2f1.hpp"
#include "efimov4/io.hpp"
#include "efimov4/recombination.hpp"
#include "efimov4/rootfind.hpp"
#include "efimov4/system.hpp"
#include "efimov4/universal.hpp"

#endif
