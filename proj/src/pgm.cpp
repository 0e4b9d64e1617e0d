#include "ckf/pgm.hpp"

#include <cctype>
#include <fstream>
#include <string>

namespace ckf {
namespace {

// Reads the next header token, skipping whitespace and '#' comments.
bool next_token(std::istream& in, std::string& tok) {
  tok.clear();
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c) && c != '#') {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  if (c == '#') in.unget();
  return !tok.empty();
}

long parse_positive(const std::string& tok, const std::string& path,
                    const char* what) {
  std::size_t pos = 0;
  long v = -1;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size() || v <= 0)
    throw Error(Errc::bad_format,
                path + ": bad " + what + " '" + tok + "'");
  return v;
}

}  // namespace

Mask read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);

  std::string tok;
  if (!next_token(in, tok) || tok != "P5")
    throw Error(Errc::bad_format, path + ": not a binary PGM (magic '" + tok + "')");
  if (!next_token(in, tok))
    throw Error(Errc::bad_format, path + ": truncated header");
  const long w = parse_positive(tok, path, "width");
  if (!next_token(in, tok))
    throw Error(Errc::bad_format, path + ": truncated header");
  const long h = parse_positive(tok, path, "height");
  if (!next_token(in, tok))
    throw Error(Errc::bad_format, path + ": truncated header");
  const long maxval = parse_positive(tok, path, "maxval");
  if (maxval > 255)
    throw Error(Errc::bad_format,
                path + ": maxval " + std::to_string(maxval) + " > 255 unsupported");
  // The single whitespace byte after maxval was already consumed by the
  // tokenizer; pixel data starts here.
  Mask m(static_cast<int>(w), static_cast<int>(h));
  in.read(reinterpret_cast<char*>(m.pixels.data()),
          static_cast<std::streamsize>(m.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(m.pixels.size()))
    throw Error(Errc::bad_format,
                path + ": expected " + std::to_string(m.pixels.size()) +
                    " pixel bytes, got " + std::to_string(in.gcount()));
  return m;
}

void write_pgm(const std::string& path, const Mask& mask) {
  if (mask.width <= 0 || mask.height <= 0)
    throw Error(Errc::bad_config, "cannot write empty mask to " + path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  out << "P5\n" << mask.width << ' ' << mask.height << "\n255\n";
  std::string bytes(mask.pixels.size(), '\0');
  for (std::size_t i = 0; i < mask.pixels.size(); ++i)
    bytes[i] = mask.pixels[i] ? '\xff' : '\0';
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io_error, "short write to " + path);
}

}  // namespace ckf
