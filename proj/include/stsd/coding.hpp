#pragma once

#include <cstdint>
#include <vector>

namespace stsd {

// Rate-1/2 non-systematic convolutional code, constraint length 7,
// generators 133/171 (octal), terminated by six zero tail bits. LLR sign
// convention everywhere: positive favors binary 0.

struct ConvCode {
    static constexpr int memory = 6;
    static constexpr int states = 64;
    static constexpr unsigned g0 = 0133;
    static constexpr unsigned g1 = 0171;
};

/// Encode and terminate; output holds 2*(len(info)+6) bits, interleaved
/// (g0 output, g1 output) per input bit.
std::vector<uint8_t> conv_encode(const std::vector<uint8_t>& info);

struct BcjrResult {
    std::vector<double> extrinsic;   // per coded bit: a posteriori minus input
    std::vector<uint8_t> info_hard;  // hard decisions on the info bits
};

/// Max-log forward/backward pass over the 64-state trellis. Input length
/// must be 2*(k+6) for some k >= 1.
BcjrResult bcjr_decode(const std::vector<double>& coded_llrs);

/// Max-log a posteriori coded-bit LLRs by enumerating all 2^k codewords
/// (k <= 16). Test reference for bcjr_decode.
std::vector<double> codeword_oracle(const std::vector<double>& coded_llrs, int k);

}  // namespace stsd
