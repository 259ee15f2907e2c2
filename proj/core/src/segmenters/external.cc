#include "segtrack/segmenters/external.h"

#include <cmath>
#include <cstdlib>

#include "segtrack/error.h"

namespace segtrack {
namespace {

std::pair<int, int> parse_size(const std::string& text) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t used_w = 0;
    std::size_t used_h = 0;
    const int w = std::stoi(text.substr(0, x), &used_w);
    const int h = std::stoi(text.substr(x + 1), &used_h);
    if (used_w != x || used_h != text.size() - x - 1 || w < 1 || h < 1) {
      throw std::invalid_argument(text);
    }
    return {w, h};
  } catch (const std::exception&) {
    throw ConfigError("external: input_size must look like 385x385, got '" + text + "'");
  }
}

}  // namespace

ExternalParams ExternalParams::from(const Params& p) {
  ExternalParams e;
  e.endpoint = p.get_string("endpoint", "");
  if (e.endpoint.empty()) {
    if (const char* env = std::getenv(kEndpointEnv)) e.endpoint = env;
  }
  if (e.endpoint.empty()) {
    throw ConfigError(std::string("external segmenter needs an endpoint (set ") +
                      kEndpointEnv + " or segmenter.external.endpoint)");
  }
  if (p.has("mode")) e.mode = parse_template_mode(p.get_string("mode", ""));
  e.context = p.get_double("context", e.context);
  if (!(e.context >= 1.0)) throw ConfigError("external: context must be >= 1");
  if (p.has("input_size")) {
    const auto [w, h] = parse_size(p.get_string("input_size", ""));
    e.input_width = w;
    e.input_height = h;
  }
  return e;
}

ExternalSegmenter::ExternalSegmenter(std::unique_ptr<Transport> transport,
                                     ExternalParams params)
    : transport_(std::move(transport)), params_(std::move(params)) {}

ExternalSegmenter::~ExternalSegmenter() {
  if (broken_ || !transport_) return;
  try {
    transport_->send(wire::make_shutdown());
  } catch (const TransportError&) {
    // Peer already gone.
  }
}

std::unique_ptr<ExternalSegmenter> ExternalSegmenter::connect(
    const ExternalParams& params) {
  return std::make_unique<ExternalSegmenter>(open_endpoint(params.endpoint), params);
}

wire::Message ExternalSegmenter::exchange(const wire::Message& request,
                                          wire::MessageType expect) {
  if (broken_) throw TransportError("external segmenter: connection already failed");
  try {
    transport_->send(request);
    std::optional<wire::Message> reply = transport_->receive();
    if (!reply) throw TransportError("external segmenter closed the connection");
    if (reply->type == wire::MessageType::Error) {
      throw TransportError("external segmenter: " + wire::decode_error(reply->payload));
    }
    if (reply->type != expect) {
      throw TransportError("external segmenter: unexpected reply type");
    }
    return std::move(*reply);
  } catch (const TransportError&) {
    broken_ = true;
    throw;
  }
}

void ExternalSegmenter::do_init(const Template& tmpl) {
  if (broken_) throw TransportError("external segmenter: connection already failed");
  try {
    transport_->send(wire::make_init(tmpl));
  } catch (const TransportError&) {
    broken_ = true;
    throw;
  }
  sent_init_ = true;
}

ProbMap ExternalSegmenter::do_segment(const SearchingArea& sa) {
  if (!sent_init_) do_init(Template::bbox_channel(sa.source_bbox));
  const int cw = sa.patch.width();
  const int ch = sa.patch.height();
  const int sw = params_.input_width.value_or(cw);
  const int sh = params_.input_height.value_or(ch);
  const BoundingBox local = sa.local_bbox();
  wire::Message request;
  if (sw == cw && sh == ch) {
    request = wire::make_segment(sa.patch, local);
  } else {
    // Pixel centers map as (x + 0.5) * s - 0.5 under the resize.
    const double fx = static_cast<double>(sw) / cw;
    const double fy = static_cast<double>(sh) / ch;
    const BoundingBox scaled((local.cx() + 0.5) * fx - 0.5, (local.cy() + 0.5) * fy - 0.5,
                             local.w() * fx, local.h() * fy);
    request = wire::make_segment(resize_bilinear(sa.patch, sw, sh), scaled);
  }
  const wire::Message reply = exchange(request, wire::MessageType::Result);
  wire::ResultReply result;
  try {
    result = wire::decode_result(reply.payload);
  } catch (const TransportError&) {
    broken_ = true;
    throw;
  }
  if (result.width != static_cast<std::uint32_t>(sw) ||
      result.height != static_cast<std::uint32_t>(sh)) {
    throw TransportError("external segmenter: RESULT is " + std::to_string(result.width) +
                         "x" + std::to_string(result.height) + ", expected " +
                         std::to_string(sw) + "x" + std::to_string(sh));
  }
  for (float v : result.probabilities) {
    if (!(v >= 0.0F && v <= 1.0F)) {
      throw TransportError("external segmenter: probability outside [0,1]");
    }
  }
  ProbMap map(sw, sh, std::move(result.probabilities));
  if (sw == cw && sh == ch) return map;
  return resize_bilinear(map, cw, ch);
}

}  // namespace segtrack
