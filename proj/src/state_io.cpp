#include "p14/state_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace p14 {

namespace {

constexpr std::array<char, 8> kMagic{'P', '1', '4', 'S', 'T', 'A', 'T', 'E'};

template <typename U>
void put_le(std::ostream& os, U value) {
  std::array<char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  os.write(bytes.data(), bytes.size());
}

template <typename U>
U get_le(std::istream& is) {
  std::array<unsigned char, sizeof(U)> bytes;
  if (!is.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) throw StateFormatError("truncated state file");
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

const char* rep_name(Representation r) { return r == Representation::Position ? "position" : "momentum"; }

HalfInteger half_from(const nlohmann::json& j, const char* key) {
  return HalfInteger::from_twice(j.at(key).get<int>());
}

}  // namespace

nlohmann::ordered_json label_to_json(const IrrepLabel& label) {
  nlohmann::ordered_json j;
  std::visit(
      [&](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, ClassI>) {
          j["class"] = "I";
          j["kappa"] = l.kappa;
          j["two_s"] = l.s.twice();
          j["two_I"] = l.isospin.twice();
        } else if constexpr (std::is_same_v<T, ClassII>) {
          j["class"] = "II";
          j["two_s"] = l.s.twice();
        } else if constexpr (std::is_same_v<T, ClassIII>) {
          j["class"] = "III";
          j["eta"] = l.eta;
          j["two_l0"] = l.l0.twice();
          j["l1"] = {l.l1.real(), l.l1.imag()};
        } else {
          j["class"] = "IV";
        }
      },
      label);
  return j;
}

IrrepLabel label_from_json(const nlohmann::json& j) {
  const std::string cls = j.at("class").get<std::string>();
  if (cls == "I") return ClassI{j.at("kappa").get<double>(), half_from(j, "two_s"), half_from(j, "two_I")};
  if (cls == "II") return ClassII{half_from(j, "two_s")};
  if (cls == "III") {
    const auto& l1 = j.at("l1");
    return ClassIII{j.at("eta").get<double>(), half_from(j, "two_l0"),
                    Complex(l1.at(0).get<double>(), l1.at(1).get<double>())};
  }
  if (cls == "IV") return ClassIV{};
  throw StateFormatError("unknown class label '" + cls + "'");
}

nlohmann::ordered_json grid_to_json(const MomentumGrid& grid) {
  nlohmann::ordered_json spatial = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < grid.spatial_rank(); ++a) {
    const AxisSpec& ax = grid.axis(a);
    spatial.push_back({{"direction", ax.direction}, {"points", ax.points}, {"extent", ax.extent}});
  }
  nlohmann::ordered_json j;
  j["spatial"] = spatial;
  j["mass"] = {{"points", grid.mass_axis().points}, {"extent", grid.mass_axis().extent}};
  return j;
}

MomentumGrid grid_from_json(const nlohmann::json& j) {
  std::vector<AxisSpec> spatial;
  for (const auto& a : j.at("spatial")) {
    spatial.push_back({a.at("direction").get<int>(), a.at("points").get<std::size_t>(), a.at("extent").get<double>()});
  }
  const auto& m = j.at("mass");
  return MomentumGrid(std::move(spatial), {4, m.at("points").get<std::size_t>(), m.at("extent").get<double>()});
}

void write_state(std::ostream& os, const StateFile& state) {
  const WaveFunction& psi = state.psi;
  nlohmann::ordered_json header;
  header["format_version"] = kStateFormatVersion;
  header["label"] = label_to_json(state.label);
  header["grid"] = grid_to_json(psi.grid());
  header["two_s"] = psi.spin().twice();
  header["two_I"] = psi.isospin().twice();
  header["components"] = psi.components();
  header["representation"] = rep_name(psi.representation());
  header["time"] = state.time;
  header["amplitude_count"] = psi.data().size();
  const std::string text = header.dump();

  os.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(os, kStateFormatVersion);
  put_le<std::uint64_t>(os, text.size());
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (Eigen::Index k = 0; k < psi.data().size(); ++k) {
    put_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(psi.data()[k].real()));
    put_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(psi.data()[k].imag()));
  }
  if (!os) throw StateFormatError("failed writing state");
}

StateFile read_state(std::istream& is) {
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) throw StateFormatError("not a state file");
  const auto version = get_le<std::uint32_t>(is);
  if (version != kStateFormatVersion) throw StateFormatError("unsupported state format version");
  const auto length = get_le<std::uint64_t>(is);
  if (length > (1u << 24)) throw StateFormatError("state header too large");
  std::string text(length, '\0');
  if (!is.read(text.data(), static_cast<std::streamsize>(length))) throw StateFormatError("truncated header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
    const std::string rep = header.at("representation").get<std::string>();
    if (rep != "position" && rep != "momentum") throw StateFormatError("unknown representation");
    WaveFunction psi(grid_from_json(header.at("grid")), half_from(header, "two_s"), half_from(header, "two_I"),
                     rep == "position" ? Representation::Position : Representation::Momentum);
    if (header.at("amplitude_count").get<Eigen::Index>() != psi.data().size()) {
      throw StateFormatError("amplitude count does not match grid and components");
    }
    for (Eigen::Index k = 0; k < psi.data().size(); ++k) {
      const double re = std::bit_cast<double>(get_le<std::uint64_t>(is));
      const double im = std::bit_cast<double>(get_le<std::uint64_t>(is));
      psi.data()[k] = {re, im};
    }
    if (is.peek() != std::char_traits<char>::eof()) throw StateFormatError("trailing bytes after amplitudes");
    return {label_from_json(header.at("label")), header.at("time").get<double>(), std::move(psi)};
  } catch (const nlohmann::json::exception& e) {
    throw StateFormatError(std::string("malformed state header: ") + e.what());
  } catch (const std::domain_error& e) {
    throw StateFormatError(std::string("invalid state header: ") + e.what());
  }
}

void write_state_file(const std::filesystem::path& path, const StateFile& state) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw StateFormatError("cannot open " + path.string() + " for writing");
  write_state(os, state);
}

StateFile read_state_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw StateFormatError("cannot open " + path.string());
  return read_state(is);
}

}  // namespace p14
