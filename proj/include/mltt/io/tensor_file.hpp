// Copyright 2026 The mltt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <variant>
#include <vector>

#include "mltt/dense/tensor.hpp"
#include "mltt/errors.hpp"
#include "mltt/tt/train.hpp"

namespace mltt {

// Binary layout (all integers and floats little-endian):
//   magic "MLTT" | u32 version | u8 kind | u8 ordering | u16 zero | u64 order
//   dense:  u64 shape[order]
//   paired: u64 row[order] u64 col[order]
//   tt:     u64 modes[order] u64 ranks[order + 1]
//   gtt:    u64 row[order] u64 col[order] u64 ranks[order + 1]
//   payload: f64 values; trains store core after core, each column-major r0 x n x r1.

enum class TensorKind : std::uint8_t { dense = 0, paired = 1, tt = 2, gtt = 3 };

inline const char* kind_name(TensorKind k) {
    switch (k) {
        case TensorKind::dense: return "dense";
        case TensorKind::paired: return "paired";
        case TensorKind::tt: return "tt";
        case TensorKind::gtt: return "gtt";
    }
    return "unknown";
}

inline constexpr std::uint32_t kTensorFileVersion = 1;
inline constexpr std::uint8_t kInterleavedColumnMajor = 0;

using TensorValue = std::variant<DenseTensor, PairedTensor, TensorTrain, PairedTensorTrain>;

struct TensorFile {
    TensorValue value;

    TensorKind kind() const { return static_cast<TensorKind>(value.index()); }
    bool is_train() const { return kind() == TensorKind::tt || kind() == TensorKind::gtt; }

    /// Paired view of the dense kinds; a plain dense tensor becomes a column.
    PairedTensor paired() const {
        if (auto* p = std::get_if<PairedTensor>(&value)) return *p;
        if (auto* d = std::get_if<DenseTensor>(&value)) return as_column(*d);
        if (auto* g = std::get_if<PairedTensorTrain>(&value)) return reconstruct(*g);
        return as_column(reconstruct(std::get<TensorTrain>(value)));
    }

    PairedTensorTrain gtt() const {
        if (auto* g = std::get_if<PairedTensorTrain>(&value)) return *g;
        if (auto* t = std::get_if<TensorTrain>(&value)) return PairedTensorTrain::column(*t);
        throw ConfigError(std::string("expected a train, file holds kind ") + kind_name(kind()));
    }
};

namespace detail {

class ByteWriter {
public:
    void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
    void u16(std::uint16_t v) { put(v, 2); }
    void u32(std::uint32_t v) { put(v, 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
    void sizes(const std::vector<std::size_t>& v) {
        for (auto x : v) u64(x);
    }
    void values(const std::vector<double>& v) {
        for (auto x : v) f64(x);
    }
    std::string take() { return std::move(out_); }

private:
    void put(std::uint64_t v, int bytes) {
        for (int b = 0; b < bytes; ++b) out_.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
    }
    std::string out_;
};

class ByteReader {
public:
    explicit ByteReader(const std::string& bytes) : b_(bytes) {}

    std::size_t offset() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return b_.size() - pos_; }

    std::uint8_t u8(const char* what) { return static_cast<std::uint8_t>(get(1, what)); }
    std::uint16_t u16(const char* what) { return static_cast<std::uint16_t>(get(2, what)); }
    std::uint32_t u32(const char* what) { return static_cast<std::uint32_t>(get(4, what)); }
    std::uint64_t u64(const char* what) { return get(8, what); }
    double f64(const char* what) { return std::bit_cast<double>(get(8, what)); }

    std::size_t extent(const char* what, bool allow_zero = false) {
        const std::size_t at = pos_;
        const auto v = u64(what);
        if ((v == 0 && !allow_zero) || v > (std::uint64_t{1} << 40))
            throw FormatError(std::string("implausible ") + what + " " + std::to_string(v), at);
        return static_cast<std::size_t>(v);
    }
    std::vector<std::size_t> extents(std::size_t n, const char* what) {
        std::vector<std::size_t> v(n);
        for (auto& x : v) x = extent(what);
        return v;
    }
    std::vector<double> values(std::size_t n) {
        if (remaining() / 8 < n)
            throw FormatError("payload needs " + std::to_string(n) + " values, " + std::to_string(remaining() / 8) +
                                  " present",
                              pos_);
        std::vector<double> v(n);
        for (auto& x : v) x = f64("payload");
        return v;
    }
    void expect(const std::string& s, const char* what) {
        if (remaining() < s.size() || b_.compare(pos_, s.size(), s) != 0) throw FormatError(std::string("bad ") + what, pos_);
        pos_ += s.size();
    }

private:
    std::uint64_t get(int bytes, const char* what) {
        if (remaining() < static_cast<std::size_t>(bytes))
            throw FormatError(std::string("truncated while reading ") + what, pos_);
        std::uint64_t v = 0;
        for (int b = 0; b < bytes; ++b)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b_[pos_ + static_cast<std::size_t>(b)])) << (8 * b);
        pos_ += static_cast<std::size_t>(bytes);
        return v;
    }
    const std::string& b_;
    std::size_t pos_ = 0;
};

inline void write_train(ByteWriter& w, const TensorTrain& t) {
    w.sizes(t.ranks());
    for (const auto& c : t.cores()) w.values(c.data());
}

inline TensorTrain read_train(ByteReader& r, const std::vector<std::size_t>& modes) {
    const std::size_t at = r.offset();
    std::vector<std::size_t> ranks(modes.size() + 1);
    for (auto& x : ranks) x = r.extent("rank");
    if (ranks.front() != 1 || ranks.back() != 1) throw FormatError("boundary ranks must be 1", at);
    std::vector<TrainCore> cores;
    for (std::size_t n = 0; n < modes.size(); ++n)
        cores.emplace_back(ranks[n], modes[n], ranks[n + 1], r.values(ranks[n] * modes[n] * ranks[n + 1]));
    return TensorTrain(std::move(cores));
}

}  // namespace detail

inline std::string encode_tensor(const TensorValue& value) {
    detail::ByteWriter w;
    for (char ch : std::string("MLTT")) w.u8(static_cast<std::uint8_t>(ch));
    w.u32(kTensorFileVersion);
    w.u8(static_cast<std::uint8_t>(value.index()));
    w.u8(kInterleavedColumnMajor);
    w.u16(0);
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, DenseTensor>) {
                w.u64(x.shape().order());
                w.sizes(x.shape().values());
                w.values(x.data());
            } else if constexpr (std::is_same_v<T, PairedTensor>) {
                w.u64(x.order());
                w.sizes(x.row_shape().values());
                w.sizes(x.col_shape().values());
                w.values(x.data());
            } else if constexpr (std::is_same_v<T, TensorTrain>) {
                w.u64(x.order());
                w.sizes(x.shape().values());
                detail::write_train(w, x);
            } else {
                w.u64(x.order());
                w.sizes(x.row_shape().values());
                w.sizes(x.col_shape().values());
                detail::write_train(w, x.train());
            }
        },
        value);
    return w.take();
}

inline TensorFile decode_tensor(const std::string& bytes) {
    detail::ByteReader r(bytes);
    r.expect("MLTT", "magic");
    std::size_t at = r.offset();
    if (auto v = r.u32("version"); v != kTensorFileVersion)
        throw FormatError("unsupported format version " + std::to_string(v), at);
    at = r.offset();
    const auto kind = r.u8("kind");
    if (kind > 3) throw FormatError("unknown tensor kind " + std::to_string(kind), at);
    at = r.offset();
    if (r.u8("ordering") != kInterleavedColumnMajor) throw FormatError("unsupported ordering tag", at);
    at = r.offset();
    if (r.u16("reserved") != 0) throw FormatError("reserved field must be zero", at);
    const std::size_t order = r.extent("order", true);
    if (order > 64) throw FormatError("implausible order " + std::to_string(order), r.offset() - 8);

    TensorFile f;
    try {
        switch (static_cast<TensorKind>(kind)) {
            case TensorKind::dense: {
                Shape s(r.extents(order, "mode size"));
                f.value = DenseTensor(s, r.values(s.total()));
                break;
            }
            case TensorKind::paired: {
                Shape row(r.extents(order, "row size")), col(r.extents(order, "column size"));
                f.value = PairedTensor(row, col, r.values(row.total() * col.total()));
                break;
            }
            case TensorKind::tt: {
                if (order == 0) throw FormatError("a train needs at least one core", r.offset());
                f.value = detail::read_train(r, r.extents(order, "mode size"));
                break;
            }
            case TensorKind::gtt: {
                if (order == 0) throw FormatError("a train needs at least one core", r.offset());
                Shape row(r.extents(order, "row size")), col(r.extents(order, "column size"));
                std::vector<std::size_t> modes(order);
                for (std::size_t n = 0; n < order; ++n) modes[n] = row[n] * col[n];
                f.value = PairedTensorTrain(detail::read_train(r, modes), row, col);
                break;
            }
        }
    } catch (const DimensionError& e) {
        throw FormatError(e.what(), r.offset());
    }
    if (r.remaining() != 0) throw FormatError(std::to_string(r.remaining()) + " trailing bytes", r.offset());
    return f;
}

inline void write_tensor_file(const std::string& path, const TensorValue& value) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    const auto bytes = encode_tensor(value);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ConfigError("failed writing " + path);
}

inline TensorFile read_tensor_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path, 0);
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_tensor(bytes);
}

}  // namespace mltt
