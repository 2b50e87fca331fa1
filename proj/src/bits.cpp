#include "ltedci/bits.hpp"

namespace ltedci {

std::string bitsToHex(const BitVector& bits) {
    static const char* kDigits = "0123456789ABCDEF";
    std::string out;
    const size_t pad = (4 - bits.size() % 4) % 4;
    uint8_t nibble = 0;
    size_t count = pad;
    for (uint8_t b : bits) {
        nibble = static_cast<uint8_t>((nibble << 1) | (b & 1u));
        if (++count == 4) {
            out.push_back(kDigits[nibble]);
            nibble = 0;
            count = 0;
        }
    }
    return out;
}

}  // namespace ltedci
