#pragma once

#include "grayjpeg/block.hpp"
#include "grayjpeg/codec.hpp"
#include "grayjpeg/container.hpp"
#include "grayjpeg/entropy.hpp"
#include "grayjpeg/error.hpp"
#include "grayjpeg/huffman.hpp"
#include "grayjpeg/pgm.hpp"
#include "grayjpeg/quantization.hpp"
#include "grayjpeg/scan.hpp"
#include "grayjpeg/transform.hpp"
#include "grayjpeg/zigzag.hpp"
