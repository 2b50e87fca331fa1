#include "ltedci/dci.hpp"

#include <algorithm>
#include <cmath>

namespace ltedci {

const char* dciFormatName(DciFormat f) {
    switch (f) {
        case DciFormat::f0: return "Format0";
        case DciFormat::f1: return "Format1";
        case DciFormat::f1a: return "Format1A";
        case DciFormat::f2: return "Format2";
        case DciFormat::f2a: return "Format2A";
    }
    fail(Err::UnsupportedFormat, "bad format enum");
}

const char* linkDirectionName(LinkDirection d) {
    return d == LinkDirection::uplink ? "Uplink" : "Downlink";
}

LinkDirection dciDirection(DciFormat f) {
    return f == DciFormat::f0 ? LinkDirection::uplink : LinkDirection::downlink;
}

int rbgSize(int nDlRb) {
    if (nDlRb <= 10) return 1;
    if (nDlRb <= 26) return 2;
    if (nDlRb <= 63) return 3;
    if (nDlRb <= 110) return 4;
    fail(Err::UnsupportedBandwidth, "NDLRB above 110");
}

int type0BitmapLength(int nDlRb) {
    const int p = rbgSize(nDlRb);
    return (nDlRb + p - 1) / p;
}

namespace {

int ceilLog2(int v) {
    int bits = 0;
    while ((1 << bits) < v) ++bits;
    return bits;
}

int rivBits(int nDlRb) { return ceilLog2(nDlRb * (nDlRb + 1) / 2); }

// Raw sizes before the format-0/1A equalization and collision padding.
int rawSize(DciFormat f, int nDlRb, int cellRefPorts) {
    const int bitmap = type0BitmapLength(nDlRb);
    const int raHeader = nDlRb > 10 ? 1 : 0;
    switch (f) {
        case DciFormat::f0:
            // flag, hopping, RIV, mcs+rv, ndi, tpc, dmrs shift, cqi request
            return 1 + 1 + rivBits(nDlRb) + 5 + 1 + 2 + 3 + 1;
        case DciFormat::f1a:
            // flag, localized/distributed, RIV, mcs, harq, ndi, rv, tpc
            return 1 + 1 + rivBits(nDlRb) + 5 + 3 + 1 + 2 + 2;
        case DciFormat::f1:
            return raHeader + bitmap + 5 + 3 + 1 + 2 + 2;
        case DciFormat::f2:
            return raHeader + bitmap + 2 + 3 + 1 + 2 * (5 + 1 + 2) +
                   (cellRefPorts == 4 ? 6 : 3);
        case DciFormat::f2a:
            return raHeader + bitmap + 2 + 3 + 1 + 2 * (5 + 1 + 2) +
                   (cellRefPorts == 4 ? 2 : 0);
    }
    fail(Err::UnsupportedFormat, "bad format enum");
}

}  // namespace

int dciSize(DciFormat f, int nDlRb, int cellRefPorts) {
    const int shared = std::max(rawSize(DciFormat::f0, nDlRb, cellRefPorts),
                                rawSize(DciFormat::f1a, nDlRb, cellRefPorts));
    if (f == DciFormat::f0 || f == DciFormat::f1a) return shared;
    const int raw = rawSize(f, nDlRb, cellRefPorts);
    return raw == shared ? raw + 1 : raw;
}

PrbSet raType0ToPrbs(const BitVector& bitmap, int nDlRb) {
    if (bitmap.size() != static_cast<size_t>(type0BitmapLength(nDlRb)))
        fail(Err::WrongBitmapLength, "type-0 bitmap has the wrong length");
    const int p = rbgSize(nDlRb);
    PrbSet out;
    for (size_t g = 0; g < bitmap.size(); ++g) {
        if (!bitmap[g]) continue;
        for (int rb = static_cast<int>(g) * p; rb < std::min((static_cast<int>(g) + 1) * p, nDlRb);
             ++rb)
            out.indices.push_back(rb);
    }
    return out;
}

PrbSet raType1ToPrbs(const BitVector& field, int nDlRb) {
    const int p = rbgSize(nDlRb);
    const int total = type0BitmapLength(nDlRb);
    const int subsetBits = ceilLog2(p);
    if (field.size() != static_cast<size_t>(total))
        fail(Err::WrongBitmapLength, "type-1 field has the wrong length");
    if (total < subsetBits + 1 + 1) fail(Err::MalformedRaField, "type-1 field too small");
    const int subset = static_cast<int>(readUint(field, 0, subsetBits));
    const int shift = field[static_cast<size_t>(subsetBits)];
    const int bitmapLen = total - subsetBits - 1;
    if (subset >= p) fail(Err::MalformedRaField, "type-1 subset out of range");

    // PRBs of the chosen RBG subset in increasing order.
    std::vector<int> subsetPrbs;
    for (int rb = 0; rb < nDlRb; ++rb)
        if ((rb / p) % p == subset) subsetPrbs.push_back(rb);
    // The bitmap addresses a window of the subset; shift=1 selects the tail.
    int offset = 0;
    if (shift == 1) offset = std::max(0, static_cast<int>(subsetPrbs.size()) - bitmapLen);
    PrbSet out;
    for (int j = 0; j < bitmapLen; ++j) {
        const size_t idx = static_cast<size_t>(offset + j);
        if (idx >= subsetPrbs.size()) break;
        if (field[static_cast<size_t>(subsetBits + 1 + j)]) out.indices.push_back(subsetPrbs[idx]);
    }
    return out;
}

PrbSet raType2RivToPrbs(uint32_t riv, int nDlRb) {
    const uint32_t maxRiv = static_cast<uint32_t>(nDlRb) * (nDlRb + 1) / 2;
    if (riv >= maxRiv) fail(Err::InvalidRiv, "RIV " + std::to_string(riv) + " out of range");
    int length = static_cast<int>(riv) / nDlRb + 1;
    int start = static_cast<int>(riv) % nDlRb;
    if (start + length > nDlRb) {
        length = nDlRb - length + 2;
        start = nDlRb - 1 - start;
    }
    if (start < 0 || length < 1 || start + length > nDlRb)
        fail(Err::InvalidRiv, "RIV " + std::to_string(riv) + " decodes outside the band");
    PrbSet out;
    for (int rb = start; rb < start + length; ++rb) out.indices.push_back(rb);
    return out;
}

uint32_t rivEncode(int start, int length, int nDlRb) {
    if (start < 0 || length < 1 || start + length > nDlRb)
        fail(Err::OutOfRange, "allocation exceeds the band");
    if (length - 1 <= nDlRb / 2)
        return static_cast<uint32_t>(nDlRb * (length - 1) + start);
    return static_cast<uint32_t>(nDlRb * (nDlRb - length + 1) + (nDlRb - 1 - start));
}

std::string prbSetToString(const PrbSet& prbs) {
    std::string out = "[";
    const std::vector<int>& v = prbs.indices;
    size_t i = 0;
    while (i < v.size()) {
        size_t j = i;
        while (j + 1 < v.size() && v[j + 1] == v[j] + 1) ++j;
        if (!out.ends_with("[")) out += " ";
        if (j - i >= 2) {
            out += std::to_string(v[i]) + "..." + std::to_string(v[j]);
            i = j + 1;
        } else {
            out += std::to_string(v[i]);
            ++i;
        }
    }
    out += "]";
    return out;
}

namespace {

class BitReader {
  public:
    BitReader(const BitVector& bits) : bits_(bits) {}
    uint64_t take(int width) {
        if (pos_ + static_cast<size_t>(width) > bits_.size())
            fail(Err::SizeMismatch, "payload shorter than the field layout");
        const uint64_t v = readUint(bits_, pos_, width);
        pos_ += static_cast<size_t>(width);
        return v;
    }
    BitVector takeBits(int width) {
        BitVector out;
        out.reserve(static_cast<size_t>(width));
        for (int i = 0; i < width; ++i)
            out.push_back(static_cast<uint8_t>(take(1)));
        return out;
    }
    size_t remaining() const { return bits_.size() - pos_; }

  private:
    const BitVector& bits_;
    size_t pos_ = 0;
};

void addField(DciMessage& msg, const std::string& name, int width, uint64_t value) {
    msg.fields.push_back({name, width, value});
}

DciMessage parseShared01a(const BitVector& bits, int nDlRb, int cellRefPorts) {
    DciMessage msg;
    BitReader rd(bits);
    const int flag = static_cast<int>(rd.take(1));
    const int nRiv = rivBits(nDlRb);
    if (flag == 0) {
        msg.format = DciFormat::f0;
        addField(msg, "Flag0Or1A", 1, 0);
        addField(msg, "HoppingFlag", 1, rd.take(1));
        const uint64_t riv = rd.take(nRiv);
        addField(msg, "RIV", nRiv, riv);
        addField(msg, "McsAndRv", 5, rd.take(5));
        addField(msg, "NewData", 1, rd.take(1));
        addField(msg, "TpcPusch", 2, rd.take(2));
        addField(msg, "DmrsCyclicShift", 3, rd.take(3));
        addField(msg, "CqiRequest", 1, rd.take(1));
        const int pad = static_cast<int>(rd.remaining());
        if (pad > 0) addField(msg, "Padding", pad, rd.take(pad));
        msg.prbSet = raType2RivToPrbs(static_cast<uint32_t>(riv), nDlRb);
    } else {
        msg.format = DciFormat::f1a;
        addField(msg, "Flag0Or1A", 1, 1);
        addField(msg, "DistributedVrb", 1, rd.take(1));
        const uint64_t riv = rd.take(nRiv);
        addField(msg, "RIV", nRiv, riv);
        addField(msg, "Mcs", 5, rd.take(5));
        addField(msg, "HarqProcess", 3, rd.take(3));
        addField(msg, "NewData", 1, rd.take(1));
        addField(msg, "Rv", 2, rd.take(2));
        addField(msg, "TpcPucch", 2, rd.take(2));
        const int pad = static_cast<int>(rd.remaining());
        if (pad > 0) addField(msg, "Padding", pad, rd.take(pad));
        msg.prbSet = raType2RivToPrbs(static_cast<uint32_t>(riv), nDlRb);
    }
    msg.direction = dciDirection(msg.format);
    msg.payload = bits;
    (void)cellRefPorts;
    return msg;
}

// Shared resource-allocation header handling for formats 1, 2 and 2A.
PrbSet parseRaHeaderAndField(DciMessage& msg, BitReader& rd, int nDlRb) {
    const int bitmapLen = type0BitmapLength(nDlRb);
    int raType = 0;
    if (nDlRb > 10) {
        raType = static_cast<int>(rd.take(1));
        addField(msg, "RaType", 1, static_cast<uint64_t>(raType));
    }
    const BitVector field = rd.takeBits(bitmapLen);
    uint64_t packed = 0;
    for (uint8_t b : field) packed = (packed << 1) | b;
    addField(msg, "RaField", bitmapLen, packed);
    return raType == 0 ? raType0ToPrbs(field, nDlRb) : raType1ToPrbs(field, nDlRb);
}

}  // namespace

DciMessage parseDci(const BitVector& bits, DciFormat f, int nDlRb, int cellRefPorts) {
    if (bits.size() != static_cast<size_t>(dciSize(f, nDlRb, cellRefPorts)))
        fail(Err::SizeMismatch, "payload length does not match the format size");
    if (f == DciFormat::f0 || f == DciFormat::f1a)
        return parseShared01a(bits, nDlRb, cellRefPorts);

    DciMessage msg;
    msg.format = f;
    msg.direction = dciDirection(f);
    msg.payload = bits;
    BitReader rd(bits);
    msg.prbSet = parseRaHeaderAndField(msg, rd, nDlRb);
    switch (f) {
        case DciFormat::f1:
            addField(msg, "Mcs", 5, rd.take(5));
            addField(msg, "HarqProcess", 3, rd.take(3));
            addField(msg, "NewData", 1, rd.take(1));
            addField(msg, "Rv", 2, rd.take(2));
            addField(msg, "TpcPucch", 2, rd.take(2));
            break;
        case DciFormat::f2:
        case DciFormat::f2a:
            addField(msg, "TpcPucch", 2, rd.take(2));
            addField(msg, "HarqProcess", 3, rd.take(3));
            addField(msg, "TbSwap", 1, rd.take(1));
            addField(msg, "Mcs1", 5, rd.take(5));
            addField(msg, "NewData1", 1, rd.take(1));
            addField(msg, "Rv1", 2, rd.take(2));
            addField(msg, "Mcs2", 5, rd.take(5));
            addField(msg, "NewData2", 1, rd.take(1));
            addField(msg, "Rv2", 2, rd.take(2));
            if (f == DciFormat::f2)
                addField(msg, "Precoding", cellRefPorts == 4 ? 6 : 3,
                         rd.take(cellRefPorts == 4 ? 6 : 3));
            else if (cellRefPorts == 4)
                addField(msg, "Precoding", 2, rd.take(2));
            break;
        default: fail(Err::UnsupportedFormat, "bad format enum");
    }
    const int pad = static_cast<int>(rd.remaining());
    if (pad > 0) addField(msg, "Padding", pad, rd.take(pad));
    return msg;
}

BitVector packDci(const DciMessage& msg, int nDlRb, int cellRefPorts) {
    BitVector bits;
    for (const DciField& fl : msg.fields) appendUint(bits, fl.value, fl.width);
    if (bits.size() != static_cast<size_t>(dciSize(msg.format, nDlRb, cellRefPorts)))
        fail(Err::SizeMismatch, "field list does not produce the format size");
    return bits;
}

}  // namespace ltedci
