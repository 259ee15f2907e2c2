#pragma once

#include <memory>
#include <optional>
#include <string>

#include "segtrack/segmenters/segmenter.h"
#include "segtrack/segmenters/transport.h"

namespace segtrack {

// Environment variable consulted when no endpoint is configured.
inline constexpr const char* kEndpointEnv = "SEGTRACK_SEGMENTER_ENDPOINT";

struct ExternalParams {
  std::string endpoint;
  TemplateMode mode = TemplateMode::ImageCrop;
  double context = 1.0;
  // Fixed peer input resolution; patches are resized to it on send and the
  // returned map is resized back to the crop size.
  std::optional<int> input_width;
  std::optional<int> input_height;

  // Keys: endpoint, mode, context, input_size ("WxH"). Falls back to the
  // environment for the endpoint. Throws ConfigError.
  static ExternalParams from(const Params& params);
};

// Client for a segmenter living in another process. One request per
// segment() call; a peer that crashes or answers with ERROR raises
// TransportError.
class ExternalSegmenter final : public Segmenter {
 public:
  ExternalSegmenter(std::unique_ptr<Transport> transport, ExternalParams params);
  // Sends SHUTDOWN if the connection is still usable.
  ~ExternalSegmenter() override;

  static std::unique_ptr<ExternalSegmenter> connect(const ExternalParams& params);

  std::string_view name() const override { return "external"; }
  TemplateMode template_mode() const override { return params_.mode; }
  double template_context() const override { return params_.context; }

 protected:
  void do_init(const Template& tmpl) override;
  ProbMap do_segment(const SearchingArea& sa) override;

 private:
  wire::Message exchange(const wire::Message& request, wire::MessageType expect);

  std::unique_ptr<Transport> transport_;
  ExternalParams params_;
  bool sent_init_ = false;
  bool broken_ = false;
};

}  // namespace segtrack
