#include "segqa/data/nifti.hpp"

#include <zlib.h>

#include <cstring>

namespace segqa {

namespace fs = std::filesystem;

namespace {

constexpr int kHeaderSize = 348;

// NIfTI-1 datatype codes
enum : int16_t {
  DT_UINT8 = 2,
  DT_INT16 = 4,
  DT_INT32 = 8,
  DT_FLOAT32 = 16,
  DT_FLOAT64 = 64,
  DT_INT8 = 256,
  DT_UINT16 = 512,
  DT_UINT32 = 768,
};

struct GzFile {
  gzFile f = nullptr;
  explicit GzFile(const fs::path& p, const char* mode) : f(gzopen(p.string().c_str(), mode)) {}
  ~GzFile() {
    if (f) gzclose(f);
  }
  GzFile(const GzFile&) = delete;
  GzFile& operator=(const GzFile&) = delete;
};

template <typename T>
T swap_bytes(T v) {
  T out;
  auto* src = reinterpret_cast<const unsigned char*>(&v);
  auto* dst = reinterpret_cast<unsigned char*>(&out);
  for (size_t i = 0; i < sizeof(T); ++i) dst[i] = src[sizeof(T) - 1 - i];
  return out;
}

template <typename T>
T read_field(const unsigned char* hdr, int offset, bool swapped) {
  T v;
  std::memcpy(&v, hdr + offset, sizeof(T));
  return swapped ? swap_bytes(v) : v;
}

template <typename Src>
void convert(const std::vector<unsigned char>& raw, size_t count, bool swapped, float slope,
             float inter, std::vector<float>& out) {
  const Src* src = reinterpret_cast<const Src*>(raw.data());
  for (size_t i = 0; i < count; ++i) {
    Src v = src[i];
    if (swapped && sizeof(Src) > 1) v = swap_bytes(v);
    out[i] = static_cast<float>(v) * slope + inter;
  }
}

}  // namespace

NiftiVolume read_nifti(const fs::path& path) {
  GzFile gz(path, "rb");
  if (!gz.f) throw IngestError("cannot open NIfTI file " + path.string());

  unsigned char hdr[kHeaderSize];
  if (gzread(gz.f, hdr, kHeaderSize) != kHeaderSize) {
    throw IngestError("truncated NIfTI header in " + path.string());
  }
  int32_t sizeof_hdr = read_field<int32_t>(hdr, 0, false);
  bool swapped = false;
  if (sizeof_hdr != kHeaderSize) {
    if (swap_bytes(sizeof_hdr) == kHeaderSize) {
      swapped = true;
    } else {
      throw IngestError("not a NIfTI-1 file (bad sizeof_hdr): " + path.string());
    }
  }
  if (std::memcmp(hdr + 344, "n+1", 3) != 0) {
    throw IngestError("unsupported NIfTI magic (expected single-file n+1): " + path.string());
  }

  const int16_t ndim = read_field<int16_t>(hdr, 40, swapped);
  if (ndim < 2 || ndim > 7) throw IngestError("bad NIfTI dim[0] in " + path.string());
  int dims[7] = {1, 1, 1, 1, 1, 1, 1};
  for (int i = 0; i < ndim; ++i) dims[i] = read_field<int16_t>(hdr, 42 + 2 * i, swapped);
  for (int i = 3; i < ndim; ++i) {
    if (dims[i] > 1) {
      throw IngestError("NIfTI volume has " + std::to_string(dims[i]) +
                        " timepoints; only 3D frames are supported: " + path.string());
    }
  }

  NiftiVolume vol;
  vol.nx = dims[0];
  vol.ny = dims[1];
  vol.nz = std::max(1, dims[2]);
  if (vol.nx < 1 || vol.ny < 1) throw IngestError("bad NIfTI dims in " + path.string());
  vol.dx = read_field<float>(hdr, 80, swapped);
  vol.dy = read_field<float>(hdr, 84, swapped);
  vol.dz = read_field<float>(hdr, 88, swapped);

  const int16_t datatype = read_field<int16_t>(hdr, 70, swapped);
  float slope = read_field<float>(hdr, 112, swapped);
  const float inter = read_field<float>(hdr, 116, swapped);
  if (slope == 0.0f || !std::isfinite(slope)) slope = 1.0f;
  const float vox_offset = read_field<float>(hdr, 108, swapped);
  const long skip = static_cast<long>(vox_offset) - kHeaderSize;
  for (long s = 0; s < skip; ++s) {
    unsigned char pad;
    if (gzread(gz.f, &pad, 1) != 1) throw IngestError("truncated NIfTI data in " + path.string());
  }

  const size_t count = static_cast<size_t>(vol.nx) * vol.ny * vol.nz;
  size_t elem = 0;
  switch (datatype) {
    case DT_UINT8:
    case DT_INT8: elem = 1; break;
    case DT_INT16:
    case DT_UINT16: elem = 2; break;
    case DT_INT32:
    case DT_UINT32:
    case DT_FLOAT32: elem = 4; break;
    case DT_FLOAT64: elem = 8; break;
    default:
      throw IngestError("unsupported NIfTI datatype " + std::to_string(datatype) + " in " +
                        path.string());
  }
  std::vector<unsigned char> raw(count * elem);
  size_t got = 0;
  while (got < raw.size()) {
    const unsigned chunk =
        static_cast<unsigned>(std::min<size_t>(raw.size() - got, 1u << 28));
    const int r = gzread(gz.f, raw.data() + got, chunk);
    if (r <= 0) throw IngestError("truncated NIfTI data in " + path.string());
    got += static_cast<size_t>(r);
  }

  vol.data.resize(count);
  switch (datatype) {
    case DT_UINT8: convert<uint8_t>(raw, count, swapped, slope, inter, vol.data); break;
    case DT_INT8: convert<int8_t>(raw, count, swapped, slope, inter, vol.data); break;
    case DT_INT16: convert<int16_t>(raw, count, swapped, slope, inter, vol.data); break;
    case DT_UINT16: convert<uint16_t>(raw, count, swapped, slope, inter, vol.data); break;
    case DT_INT32: convert<int32_t>(raw, count, swapped, slope, inter, vol.data); break;
    case DT_UINT32: convert<uint32_t>(raw, count, swapped, slope, inter, vol.data); break;
    case DT_FLOAT32: convert<float>(raw, count, swapped, slope, inter, vol.data); break;
    case DT_FLOAT64: {
      const double* src = reinterpret_cast<const double*>(raw.data());
      for (size_t i = 0; i < count; ++i) {
        double v = src[i];
        if (swapped) v = swap_bytes(v);
        vol.data[i] = static_cast<float>(v * slope + inter);
      }
      break;
    }
    default: break;
  }
  return vol;
}

void write_nifti(const fs::path& path, const NiftiVolume& vol, bool as_uint8) {
  unsigned char hdr[kHeaderSize];
  std::memset(hdr, 0, sizeof(hdr));
  auto put = [&](int offset, auto value) { std::memcpy(hdr + offset, &value, sizeof(value)); };
  put(0, int32_t{kHeaderSize});
  put(40, int16_t{3});
  put(42, static_cast<int16_t>(vol.nx));
  put(44, static_cast<int16_t>(vol.ny));
  put(46, static_cast<int16_t>(vol.nz));
  put(48, int16_t{1});
  put(50, int16_t{1});
  put(52, int16_t{1});
  put(54, int16_t{1});
  put(70, as_uint8 ? DT_UINT8 : DT_FLOAT32);
  put(72, static_cast<int16_t>(as_uint8 ? 8 : 32));  // bitpix
  put(76, 1.0f);                                     // pixdim[0]
  put(80, vol.dx);
  put(84, vol.dy);
  put(88, vol.dz);
  put(108, 352.0f);  // vox_offset
  put(112, 1.0f);    // scl_slope
  put(116, 0.0f);    // scl_inter
  std::memcpy(hdr + 344, "n+1\0", 4);

  GzFile gz(path, path.extension() == ".gz" ? "wb" : "wbT");  // T = no compression
  if (!gz.f) throw IoError("cannot write NIfTI file " + path.string());
  if (gzwrite(gz.f, hdr, kHeaderSize) != kHeaderSize) {
    throw IoError("header write failed for " + path.string());
  }
  const unsigned char extender[4] = {0, 0, 0, 0};
  if (gzwrite(gz.f, extender, 4) != 4) throw IoError("write failed for " + path.string());

  const size_t count = static_cast<size_t>(vol.nx) * vol.ny * vol.nz;
  if (as_uint8) {
    std::vector<uint8_t> buf(count);
    for (size_t i = 0; i < count; ++i) buf[i] = static_cast<uint8_t>(vol.data[i]);
    if (gzwrite(gz.f, buf.data(), static_cast<unsigned>(count)) != static_cast<int>(count)) {
      throw IoError("data write failed for " + path.string());
    }
  } else {
    const unsigned bytes = static_cast<unsigned>(count * sizeof(float));
    if (gzwrite(gz.f, vol.data.data(), bytes) != static_cast<int>(bytes)) {
      throw IoError("data write failed for " + path.string());
    }
  }
}

}  // namespace segqa
