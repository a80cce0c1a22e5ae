#include "voxbetti/model_io.hpp"

#include <bit>
#include <cstring>

#include "voxbetti/error.hpp"
#include "voxbetti/volume.hpp"

namespace voxbetti {

static_assert(std::endian::native == std::endian::little, "model files are little-endian");

namespace {

constexpr char kMagic[4] = {'C', 'B', 'T', '1'};
enum class Kind : std::uint8_t { Forest = 1, Boosted = 2 };

class Writer {
public:
  template <typename T>
  void put(T v) {
    const auto* p = reinterpret_cast<const std::byte*>(&v);
    out.insert(out.end(), p, p + sizeof v);
  }
  void put_tree(const DecisionTree& t) {
    put<std::uint64_t>(t.nodes().size());
    for (const auto& n : t.nodes()) {
      put(n.feature);
      put(n.threshold);
      put(n.left);
      put(n.right);
      put(n.value);
    }
  }
  void put_doubles(const std::vector<double>& v) {
    for (double x : v) put(x);
  }
  std::vector<std::byte> out;
};

class Reader {
public:
  explicit Reader(std::span<const std::byte> bytes) : in_(bytes) {}

  template <typename T>
  T get() {
    if (in_.size() - pos_ < sizeof(T)) throw Error(ErrorCode::Truncation, "model payload ends early");
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof v);
    pos_ += sizeof v;
    return v;
  }
  // Guards allocation sizes read from the file against what remains.
  std::size_t get_count(std::size_t min_item_bytes) {
    const auto n = get<std::uint64_t>();
    if (n > (in_.size() - pos_) / min_item_bytes) {
      throw Error(ErrorCode::Truncation, "model payload ends early");
    }
    return static_cast<std::size_t>(n);
  }
  DecisionTree get_tree() {
    std::vector<TreeNode> nodes(get_count(28));
    for (auto& n : nodes) {
      n.feature = get<std::int32_t>();
      n.threshold = get<double>();
      n.left = get<std::uint32_t>();
      n.right = get<std::uint32_t>();
      n.value = get<double>();
    }
    return DecisionTree(std::move(nodes));
  }
  std::vector<double> get_doubles(std::size_t n) {
    if (n > (in_.size() - pos_) / sizeof(double)) {
      throw Error(ErrorCode::Truncation, "model payload ends early");
    }
    std::vector<double> v(n);
    for (double& x : v) x = get<double>();
    return v;
  }
  bool done() const noexcept { return pos_ == in_.size(); }

private:
  std::span<const std::byte> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::byte> serialize_model(const Model& m) {
  Writer w;
  if (const auto* f = std::get_if<Forest>(&m)) {
    w.put(Kind::Forest);
    w.put<std::uint64_t>(f->feature_count());
    w.put<std::uint64_t>(f->seed());
    w.put<std::uint64_t>(f->trees().size());
    for (const auto& t : f->trees()) w.put_tree(t);
    w.put_doubles(f->importance());
  } else {
    const auto& b = std::get<BoostedModel>(m);
    w.put(Kind::Boosted);
    w.put<std::uint64_t>(b.feature_count());
    w.put(b.base_score());
    w.put(b.learning_rate());
    w.put<std::uint64_t>(b.trees().size());
    for (const auto& t : b.trees()) w.put_tree(t);
    w.put_doubles(b.importance());
  }

  std::vector<std::byte> out(std::size(kMagic));
  std::memcpy(out.data(), kMagic, sizeof kMagic);
  Writer header;
  header.put<std::uint64_t>(w.out.size());
  out.insert(out.end(), header.out.begin(), header.out.end());
  out.insert(out.end(), w.out.begin(), w.out.end());
  return out;
}

Model deserialize_model(std::span<const std::byte> bytes) {
  if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw Error(ErrorCode::Format, "not a CBT1 model file");
  }
  Reader header(bytes.subspan(sizeof kMagic));
  const auto length = header.get<std::uint64_t>();
  const auto body = bytes.subspan(sizeof kMagic + sizeof length);
  if (body.size() < length) throw Error(ErrorCode::Truncation, "model payload ends early");
  if (body.size() > length) throw Error(ErrorCode::Format, "trailing bytes after model payload");

  Reader r(body);
  const auto kind = r.get<Kind>();
  const auto features = static_cast<std::size_t>(r.get<std::uint64_t>());
  Model m;
  if (kind == Kind::Forest) {
    const auto seed = r.get<std::uint64_t>();
    std::vector<DecisionTree> trees(r.get_count(8));
    for (auto& t : trees) t = r.get_tree();
    auto importance = r.get_doubles(features);
    m = Forest(std::move(trees), std::move(importance), features, seed);
  } else if (kind == Kind::Boosted) {
    const auto base = r.get<double>();
    const auto rate = r.get<double>();
    std::vector<DecisionTree> trees(r.get_count(8));
    for (auto& t : trees) t = r.get_tree();
    auto importance = r.get_doubles(features);
    m = BoostedModel(std::move(trees), base, rate, std::move(importance), features);
  } else {
    throw Error(ErrorCode::Format, "unknown model kind");
  }
  if (!r.done()) throw Error(ErrorCode::Format, "model payload longer than its fields");
  return m;
}

void save_model(const std::filesystem::path& path, const Model& m) {
  write_file_bytes(path, serialize_model(m));
}

Model load_model(const std::filesystem::path& path) {
  return deserialize_model(read_file_bytes(path));
}

}  // namespace voxbetti
