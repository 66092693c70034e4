#include "svg.hpp"

#include <fstream>

#include "tdrk/errors.hpp"

namespace tdrk::svg {

Canvas::Canvas(double width, double height) : width_(width), height_(height) {
  body_.precision(6);
}

void Canvas::rect(double x, double y, double w, double h, std::string_view fill,
                  std::string_view stroke, double stroke_width) {
  body_ << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\"" << h
        << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\"" << stroke_width
        << "\"/>\n";
}

void Canvas::line(double x0, double y0, double x1, double y1, std::string_view stroke, double width,
                  std::string_view dash) {
  body_ << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y1
        << "\" stroke=\"" << stroke << "\" stroke-width=\"" << width << "\"";
  if (!dash.empty()) body_ << " stroke-dasharray=\"" << dash << "\"";
  body_ << "/>\n";
}

void Canvas::polyline(std::string_view points, std::string_view stroke, double width,
                      std::string_view dash) {
  body_ << "<polyline fill=\"none\" points=\"" << points << "\" stroke=\"" << stroke
        << "\" stroke-width=\"" << width << "\"";
  if (!dash.empty()) body_ << " stroke-dasharray=\"" << dash << "\"";
  body_ << "/>\n";
}

void Canvas::circle(double cx, double cy, double r, std::string_view fill) {
  body_ << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << r << "\" fill=\"" << fill
        << "\"/>\n";
}

void Canvas::text(double x, double y, std::string_view content, double size, std::string_view anchor,
                  double rotate) {
  body_ << "<text x=\"" << x << "\" y=\"" << y << "\" font-family=\"sans-serif\" font-size=\""
        << size << "\" text-anchor=\"" << anchor << "\"";
  if (rotate != 0.0) body_ << " transform=\"rotate(" << rotate << " " << x << " " << y << ")\"";
  body_ << ">" << escape(content) << "</text>\n";
}

std::string Canvas::str() const {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\"" << height_
      << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width_ << "\" height=\"" << height_
      << "\" fill=\"white\"/>\n"
      << body_.str() << "</svg>\n";
  return out.str();
}

void Canvas::save(const std::filesystem::path& path) const { write_file(path, str()); }

std::string escape(std::string_view text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace tdrk::svg
