// Copyright 2026 The H2V Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "h2v/y4m.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "h2v/error.hpp"

namespace h2v {

namespace {

constexpr char kMagic[] = "YUV4MPEG2";

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

void parse_fraction(const std::string& tok, int* num, int* den) {
  const auto colon = tok.find(':');
  if (colon == std::string::npos) fail(ErrorKind::kIo, "malformed Y4M fraction '" + tok + "'");
  try {
    *num = std::stoi(tok.substr(0, colon));
    *den = std::stoi(tok.substr(colon + 1));
  } catch (const std::exception&) {
    fail(ErrorKind::kIo, "malformed Y4M fraction '" + tok + "'");
  }
}

}  // namespace

Y4mHeader parse_y4m_header(const std::string& line) {
  std::istringstream ss(line);
  std::string tok;
  ss >> tok;
  if (tok != kMagic) fail(ErrorKind::kIo, "missing YUV4MPEG2 signature");
  Y4mHeader h;
  while (ss >> tok) {
    const char key = tok[0];
    const std::string val = tok.substr(1);
    try {
      switch (key) {
        case 'W': h.width = std::stoi(val); break;
        case 'H': h.height = std::stoi(val); break;
        case 'F': parse_fraction(val, &h.fps_num, &h.fps_den); break;
        case 'C':
          if (val.rfind("420", 0) == 0) {
            h.chroma = Y4mChroma::k420;
          } else if (val == "444") {
            h.chroma = Y4mChroma::k444;
          } else {
            fail(ErrorKind::kIo, "unsupported Y4M colorspace C" + val);
          }
          break;
        default: break;  // I, A, X tokens carry nothing we use
      }
    } catch (const std::invalid_argument&) {
      fail(ErrorKind::kIo, "malformed Y4M header token '" + tok + "'");
    }
  }
  if (h.width <= 0 || h.height <= 0) fail(ErrorKind::kIo, "Y4M header lacks W/H");
  return h;
}

std::string format_y4m_header(const Y4mHeader& h) {
  std::ostringstream ss;
  ss << kMagic << " W" << h.width << " H" << h.height << " F" << h.fps_num << ":" << h.fps_den
     << " Ip A1:1 " << (h.chroma == Y4mChroma::k444 ? "C444" : "C420jpeg");
  return ss.str();
}

Frame yuv_to_frame(const YuvPicture& pic) {
  Frame out(pic.width, pic.height, 3);
  const int cw = pic.chroma_width();
  const int shift = pic.chroma == Y4mChroma::k444 ? 0 : 1;
  for (int y = 0; y < pic.height; ++y) {
    for (int x = 0; x < pic.width; ++x) {
      const std::size_t ci = static_cast<std::size_t>(y >> shift) * cw + (x >> shift);
      const double Y = pic.y[static_cast<std::size_t>(y) * pic.width + x];
      const double U = pic.u[ci] - 128.0;
      const double V = pic.v[ci] - 128.0;
      const double r = Y + 1.402 * V;
      const double g = Y - 0.344136 * U - 0.714136 * V;
      const double b = Y + 1.772 * U;
      out.at(x, y, 0) = static_cast<float>(std::clamp(r / 255.0, 0.0, 1.0));
      out.at(x, y, 1) = static_cast<float>(std::clamp(g / 255.0, 0.0, 1.0));
      out.at(x, y, 2) = static_cast<float>(std::clamp(b / 255.0, 0.0, 1.0));
    }
  }
  return out;
}

YuvPicture frame_to_yuv(const Frame& frame, Y4mChroma chroma) {
  YuvPicture pic;
  pic.width = frame.width();
  pic.height = frame.height();
  pic.chroma = chroma;
  const std::size_t n = static_cast<std::size_t>(pic.width) * pic.height;
  pic.y.resize(n);
  std::vector<double> u_full(n);
  std::vector<double> v_full(n);
  for (int y = 0; y < pic.height; ++y) {
    for (int x = 0; x < pic.width; ++x) {
      double r;
      double g;
      double b;
      if (frame.channels() == 3) {
        r = frame.at(x, y, 0) * 255.0;
        g = frame.at(x, y, 1) * 255.0;
        b = frame.at(x, y, 2) * 255.0;
      } else {
        r = g = b = frame.at(x, y) * 255.0;
      }
      const std::size_t i = static_cast<std::size_t>(y) * pic.width + x;
      pic.y[i] = quantize(0.299 * r + 0.587 * g + 0.114 * b);
      u_full[i] = -0.168736 * r - 0.331264 * g + 0.5 * b + 128.0;
      v_full[i] = 0.5 * r - 0.418688 * g - 0.081312 * b + 128.0;
    }
  }
  const int cw = pic.chroma_width();
  const int ch = pic.chroma_height();
  pic.u.resize(static_cast<std::size_t>(cw) * ch);
  pic.v.resize(pic.u.size());
  const int step = chroma == Y4mChroma::k444 ? 1 : 2;
  for (int cy = 0; cy < ch; ++cy) {
    for (int cx = 0; cx < cw; ++cx) {
      double su = 0.0;
      double sv = 0.0;
      int count = 0;
      for (int dy = 0; dy < step; ++dy) {
        for (int dx = 0; dx < step; ++dx) {
          const int x = cx * step + dx;
          const int y = cy * step + dy;
          if (x >= pic.width || y >= pic.height) continue;
          const std::size_t i = static_cast<std::size_t>(y) * pic.width + x;
          su += u_full[i];
          sv += v_full[i];
          ++count;
        }
      }
      pic.u[static_cast<std::size_t>(cy) * cw + cx] = quantize(su / count);
      pic.v[static_cast<std::size_t>(cy) * cw + cx] = quantize(sv / count);
    }
  }
  return pic;
}

std::vector<YuvPicture> read_y4m_pictures(std::istream& in, Y4mHeader* header_out) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::kIo, "empty Y4M stream");
  const Y4mHeader h = parse_y4m_header(line);
  if (header_out) *header_out = h;
  std::vector<YuvPicture> pictures;
  while (std::getline(in, line)) {
    if (line.rfind("FRAME", 0) != 0) {
      fail(ErrorKind::kIo, "expected FRAME marker at picture " + std::to_string(pictures.size()));
    }
    YuvPicture pic;
    pic.width = h.width;
    pic.height = h.height;
    pic.chroma = h.chroma;
    pic.y.resize(static_cast<std::size_t>(h.width) * h.height);
    pic.u.resize(static_cast<std::size_t>(pic.chroma_width()) * pic.chroma_height());
    pic.v.resize(pic.u.size());
    for (auto* plane : {&pic.y, &pic.u, &pic.v}) {
      in.read(reinterpret_cast<char*>(plane->data()), static_cast<std::streamsize>(plane->size()));
      if (in.gcount() != static_cast<std::streamsize>(plane->size())) {
        fail(ErrorKind::kIo, "truncated Y4M picture " + std::to_string(pictures.size()));
      }
    }
    pictures.push_back(std::move(pic));
  }
  return pictures;
}

void write_y4m_pictures(std::ostream& out, const Y4mHeader& header,
                        const std::vector<YuvPicture>& pictures) {
  out << format_y4m_header(header) << "\n";
  for (const auto& pic : pictures) {
    out << "FRAME\n";
    for (const auto* plane : {&pic.y, &pic.u, &pic.v}) {
      out.write(reinterpret_cast<const char*>(plane->data()),
                static_cast<std::streamsize>(plane->size()));
    }
  }
}

FrameSequence read_y4m(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  Y4mHeader h;
  const auto pictures = read_y4m_pictures(in, &h);
  FrameSequence seq;
  seq.fps_num = h.fps_num;
  seq.fps_den = h.fps_den;
  seq.frames.reserve(pictures.size());
  for (const auto& pic : pictures) seq.frames.push_back(yuv_to_frame(pic));
  return seq;
}

void write_y4m(const FrameSequence& seq, const std::filesystem::path& path, Y4mChroma chroma) {
  if (seq.empty()) fail(ErrorKind::kEmptyInput, "cannot write an empty Y4M sequence");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  Y4mHeader h;
  h.width = seq.width();
  h.height = seq.height();
  h.fps_num = seq.fps_num;
  h.fps_den = seq.fps_den;
  h.chroma = chroma;
  std::vector<YuvPicture> pictures;
  pictures.reserve(seq.size());
  for (const auto& f : seq.frames) {
    if (f.width() != h.width || f.height() != h.height) {
      fail(ErrorKind::kDimensionMismatch, "Y4M frames must share dims");
    }
    pictures.push_back(frame_to_yuv(f, chroma));
  }
  write_y4m_pictures(out, h, pictures);
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

}  // namespace h2v
