#pragma once

#include <cstddef>

#include "wsketch/kernels.hpp"

namespace wsketch::kernels {

namespace avx2 {
double sum(const double* data, std::size_t n);
double min(const double* data, std::size_t n);
std::size_t argmax(const double* data, std::size_t n);
}  // namespace avx2

namespace neon {
double sum(const double* data, std::size_t n);
double min(const double* data, std::size_t n);
std::size_t argmax(const double* data, std::size_t n);
}  // namespace neon

}  // namespace wsketch::kernels
