#include "rcp/graphical/dump.hpp"

#include <cstring>
#include <fstream>
#include <iterator>

#include "rcp/errors.hpp"
#include "rcp/renewal/law_json.hpp"

namespace rcp {

namespace {

template <class T>
void put(std::vector<std::uint8_t>& out, const T& v) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
  out.insert(out.end(), p, p + sizeof(T));
}

void put_list(std::vector<std::uint8_t>& out, const std::vector<double>& v) {
  put(out, static_cast<std::uint64_t>(v.size()));
  const auto* p = reinterpret_cast<const std::uint8_t*>(v.data());
  out.insert(out.end(), p, p + v.size() * sizeof(double));
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : b_(b) {}

  template <class T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, b_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  std::vector<double> get_list() {
    const auto n = get<std::uint64_t>();
    if (n > (b_.size() - pos_) / sizeof(double)) throw FormatError("sample dump: truncated list");
    std::vector<double> v(n);
    std::memcpy(v.data(), b_.data() + pos_, n * sizeof(double));
    pos_ += n * sizeof(double);
    return v;
  }

  std::string get_string(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(b_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == b_.size(); }

 private:
  void need(std::size_t n) const {
    if (b_.size() - pos_ < n) throw FormatError("sample dump: truncated");
  }

  const std::vector<std::uint8_t>& b_;
  std::size_t pos_ = 0;
};

nlohmann::json header_json(const GraphicalSample& g) {
  nlohmann::json h;
  h["lo"] = g.box().lo;
  h["hi"] = g.box().hi;
  h["s"] = g.box().s;
  h["t"] = g.box().t;
  h["lambda"] = g.lambda();
  h["lambda_ref"] = g.lambda_ref();
  h["law"] = law_to_json(g.law());
  h["seed"] = g.seed();
  return h;
}

}  // namespace

std::vector<std::uint8_t> serialize_sample(const GraphicalSample& g) {
  std::vector<std::uint8_t> out(kDumpMagic, kDumpMagic + 4);
  put(out, kDumpVersion);
  const std::string header = header_json(g).dump();
  put(out, static_cast<std::uint32_t>(header.size()));
  out.insert(out.end(), header.begin(), header.end());
  for (const auto& c : g.cures()) {
    put(out, c.start);
    put_list(out, c.marks);
  }
  for (const auto& list : g.trans_lists()) put_list(out, list);
  return out;
}

GraphicalSample deserialize_sample(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kDumpMagic, 4) != 0) {
    throw FormatError("sample dump: bad magic");
  }
  Reader r(bytes);
  r.get_string(4);
  const auto version = r.get<std::uint16_t>();
  if (version != kDumpVersion) {
    throw FormatError("sample dump: version " + std::to_string(version) + ", expected " +
                      std::to_string(kDumpVersion));
  }
  const auto hlen = r.get<std::uint32_t>();
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(r.get_string(hlen));
    SpaceTimeBox box{h.at("lo").get<Point>(), h.at("hi").get<Point>(), h.at("s").get<double>(),
                     h.at("t").get<double>()};
    box.validate();
    const std::size_t n = box.num_sites();
    std::vector<RenewalTrack> cures(n);
    for (auto& c : cures) {
      c.start = r.get<double>();
      c.marks = r.get_list();
      c.horizon = box.t;
    }
    std::vector<std::vector<double>> trans(n * 2 * box.dim());
    for (auto& list : trans) list = r.get_list();
    if (!r.done()) throw FormatError("sample dump: trailing bytes");
    return GraphicalSample::from_marks(box, h.at("lambda").get<double>(), law_from_json(h.at("law")),
                                       std::move(cures), std::move(trans),
                                       h.at("seed").get<std::uint64_t>(),
                                       h.at("lambda_ref").get<double>());
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(std::string("sample dump: ") + e.what());
  }
}

void write_sample_dump(const GraphicalSample& sample, const std::string& path) {
  const auto bytes = serialize_sample(sample);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

GraphicalSample read_sample_dump(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("sample dump: cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return deserialize_sample(bytes);
}

nlohmann::json sample_to_json(const GraphicalSample& g) {
  nlohmann::json j;
  j["magic"] = "RCPG";
  j["version"] = kDumpVersion;
  j["header"] = header_json(g);
  nlohmann::json cures = nlohmann::json::array();
  for (std::size_t i = 0; i < g.num_sites(); ++i) {
    cures.push_back({{"site", g.box().coords(i)}, {"start", g.cure(i).start}, {"marks", g.cure(i).marks}});
  }
  j["cures"] = std::move(cures);
  nlohmann::json trans = nlohmann::json::array();
  for (std::size_t i = 0; i < g.num_sites(); ++i) {
    for (int dir = 0; dir < 2 * g.dim(); ++dir) {
      if (g.neighbor(i, dir) < 0) continue;
      trans.push_back({{"site", g.box().coords(i)}, {"dir", dir}, {"marks", g.trans(i, dir)}});
    }
  }
  j["trans"] = std::move(trans);
  return j;
}

std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t h) {
  const auto* p = static_cast<const std::uint8_t*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t sample_digest(const GraphicalSample& sample) {
  const auto bytes = serialize_sample(sample);
  return fnv1a64(bytes.data(), bytes.size());
}

}  // namespace rcp
