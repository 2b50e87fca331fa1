#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ltedci/bits.hpp"
#include "ltedci/errors.hpp"

namespace ltedci {

enum class DciFormat { f0, f1, f1a, f2, f2a };
enum class LinkDirection { uplink, downlink };

const char* dciFormatName(DciFormat f);    // "Format0", "Format1A", ...
const char* linkDirectionName(LinkDirection d);  // "Uplink" / "Downlink"
LinkDirection dciDirection(DciFormat f);

// Sorted, duplicate-free physical resource block indices.
struct PrbSet {
    std::vector<int> indices;
    friend bool operator==(const PrbSet&, const PrbSet&) = default;
};

// Resource block group size P for type-0/1 allocations.
int rbgSize(int nDlRb);
int type0BitmapLength(int nDlRb);

// Payload size in bits before the CRC. Formats 0 and 1A always share a size;
// the other downlink formats get one padding bit when they would collide
// with it.
int dciSize(DciFormat f, int nDlRb, int cellRefPorts);

struct DciField {
    std::string name;
    int width = 0;
    uint64_t value = 0;
};

struct DciMessage {
    DciFormat format = DciFormat::f1a;
    LinkDirection direction = LinkDirection::downlink;
    PrbSet prbSet;
    std::vector<DciField> fields;
    BitVector payload;
};

// Parses a decoded payload. For the shared format-0/1A size the flag bit
// selects the actual format, so either enum value may be passed for those.
DciMessage parseDci(const BitVector& bits, DciFormat f, int nDlRb, int cellRefPorts);

// Re-serializes the field list; the result reproduces the parsed payload.
BitVector packDci(const DciMessage& msg, int nDlRb, int cellRefPorts);

// Resource allocation decoding.
PrbSet raType0ToPrbs(const BitVector& bitmap, int nDlRb);
PrbSet raType1ToPrbs(const BitVector& field, int nDlRb);
PrbSet raType2RivToPrbs(uint32_t riv, int nDlRb);  // throws InvalidRiv
uint32_t rivEncode(int start, int length, int nDlRb);

// Bracketed rendering with runs of three or more collapsed: [0...5 8 9].
std::string prbSetToString(const PrbSet& prbs);

}  // namespace ltedci
