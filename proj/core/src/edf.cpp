#include "eegpool/edf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <regex>

namespace eegpool {
namespace {

constexpr char kTalField = '\x14';     // DC4, separates onset/texts
constexpr char kTalDuration = '\x15';  // NAK, introduces a duration
constexpr const char* kAnnotationLabel = "EDF Annotations";

// Global header field widths, in order.
constexpr int kVersionW = 8, kPatientW = 80, kRecordingW = 80, kDateW = 8, kTimeW = 8,
              kHeaderBytesW = 8, kReservedW = 44, kNRecordsW = 8, kDurationW = 8, kNSignalsW = 4;
// Per-signal field widths, field-major order.
constexpr int kLabelW = 16, kTransducerW = 80, kDimW = 8, kPhysMinW = 8, kPhysMaxW = 8,
              kDigMinW = 8, kDigMaxW = 8, kPrefilterW = 80, kSamplesW = 8, kSigReservedW = 32;

std::string ascii_clean(const std::uint8_t* p, int width) {
  std::string out(width, ' ');
  for (int i = 0; i < width; ++i) {
    out[i] = (p[i] >= 32 && p[i] <= 126) ? static_cast<char>(p[i]) : '?';
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

long parse_int_field(const std::string& text, const char* field, std::size_t offset) {
  std::string t = text;
  t.erase(0, t.find_first_not_of(' '));
  if (t.empty())
    raise(ErrorCode::NonNumericField,
          std::string("empty field '") + field + "' at byte offset " + std::to_string(offset));
  char* end = nullptr;
  long value = std::strtol(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size())
    raise(ErrorCode::NonNumericField, std::string("field '") + field + "' at byte offset " +
                                          std::to_string(offset) + ": \"" + t + "\"");
  return value;
}

double parse_double_field(const std::string& text, const char* field, std::size_t offset) {
  std::string t = text;
  t.erase(0, t.find_first_not_of(' '));
  if (t.empty())
    raise(ErrorCode::NonNumericField,
          std::string("empty field '") + field + "' at byte offset " + std::to_string(offset));
  char* end = nullptr;
  double value = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(value))
    raise(ErrorCode::NonNumericField, std::string("field '") + field + "' at byte offset " +
                                          std::to_string(offset) + ": \"" + t + "\"");
  return value;
}

void put_field(std::vector<std::uint8_t>& out, const std::string& text, int width) {
  for (int i = 0; i < width; ++i) {
    out.push_back(i < static_cast<int>(text.size()) ? static_cast<std::uint8_t>(text[i]) : ' ');
  }
}

// Shortest decimal representation that reparses to the same double and fits
// the 8-character field; falls back to the widest representation that fits.
std::string format_edf_number(double value, int width) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, value);
    if (static_cast<int>(std::strlen(buf)) > width) break;
    if (std::strtod(buf, nullptr) == value) return buf;
  }
  for (int prec = 17; prec >= 1; --prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, value);
    if (static_cast<int>(std::strlen(buf)) <= width) return buf;
  }
  return "0";
}

std::uint64_t checked_payload_bytes(const EdfHeader& h) {
  std::uint64_t per_record = 0;
  for (const auto& sig : h.signals) per_record += static_cast<std::uint64_t>(sig.samples_per_record);
  return per_record * 2u * static_cast<std::uint64_t>(h.n_records);
}

}  // namespace

long EdfHeader::payload_bytes() const { return static_cast<long>(checked_payload_bytes(*this)); }

int EdfHeader::samples_per_record_total() const {
  int total = 0;
  for (const auto& sig : signals) total += sig.samples_per_record;
  return total;
}

EdfHeader parse_edf_header(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 256)
    raise(ErrorCode::TruncatedHeader,
          "need at least 256 bytes, got " + std::to_string(bytes.size()));

  const std::uint8_t* p = bytes.data();
  EdfHeader h;
  std::size_t off = 0;
  auto text = [&](int width) {
    std::string s = ascii_clean(p + off, width);
    off += width;
    return s;
  };

  h.version = static_cast<int>(parse_int_field(text(kVersionW), "version", 0));
  h.patient_id = text(kPatientW);
  h.recording_id = text(kRecordingW);

  const std::string date = text(kDateW);
  const std::string time = text(kTimeW);
  auto parse_triplet = [](const std::string& s, const char* field, std::size_t at, int out[3]) {
    if (s.size() != 8 || s[2] != '.' || s[5] != '.')
      raise(ErrorCode::NonNumericField,
            std::string("field '") + field + "' at byte offset " + std::to_string(at));
    out[0] = static_cast<int>(parse_int_field(s.substr(0, 2), field, at));
    out[1] = static_cast<int>(parse_int_field(s.substr(3, 2), field, at));
    out[2] = static_cast<int>(parse_int_field(s.substr(6, 2), field, at));
  };
  int d[3], t[3];
  parse_triplet(date, "start_date", 168, d);
  parse_triplet(time, "start_time", 176, t);
  h.start_datetime.day = d[0];
  h.start_datetime.month = d[1];
  h.start_datetime.year = d[2] >= 85 ? 1900 + d[2] : 2000 + d[2];
  h.start_datetime.hour = t[0];
  h.start_datetime.minute = t[1];
  h.start_datetime.second = t[2];

  h.header_bytes = parse_int_field(text(kHeaderBytesW), "header_bytes", 184);
  h.reserved = text(kReservedW);
  h.n_records = parse_int_field(text(kNRecordsW), "n_records", 236);
  h.record_duration_s = parse_double_field(text(kDurationW), "record_duration", 244);
  h.n_signals = static_cast<int>(parse_int_field(text(kNSignalsW), "n_signals", 252));

  if (h.n_signals < 1)
    raise(ErrorCode::InvalidHeaderField, "n_signals must be >= 1, got " + std::to_string(h.n_signals));
  if (h.n_records < 0)
    raise(ErrorCode::InvalidHeaderField, "n_records must be >= 0, got " + std::to_string(h.n_records));
  if (h.record_duration_s <= 0.0)
    raise(ErrorCode::InvalidHeaderField, "record_duration must be positive");

  const std::size_t need = 256u * (static_cast<std::size_t>(h.n_signals) + 1);
  if (bytes.size() < need)
    raise(ErrorCode::TruncatedHeader, "header claims " + std::to_string(h.n_signals) +
                                          " signals (" + std::to_string(need) + " bytes), got " +
                                          std::to_string(bytes.size()));
  if (h.header_bytes != static_cast<long>(need))
    raise(ErrorCode::InvalidHeaderField, "header_bytes field is " + std::to_string(h.header_bytes) +
                                             ", expected " + std::to_string(need));

  const int ns = h.n_signals;
  h.signals.resize(ns);
  // Field-major layout: all labels, then all transducers, ...
  auto signal_text = [&](int width, int i) {
    std::string s = ascii_clean(p + off + static_cast<std::size_t>(width) * i, width);
    return s;
  };
  for (int i = 0; i < ns; ++i) h.signals[i].label = signal_text(kLabelW, i);
  off += static_cast<std::size_t>(kLabelW) * ns;
  for (int i = 0; i < ns; ++i) h.signals[i].transducer = signal_text(kTransducerW, i);
  off += static_cast<std::size_t>(kTransducerW) * ns;
  for (int i = 0; i < ns; ++i) h.signals[i].physical_dimension = signal_text(kDimW, i);
  off += static_cast<std::size_t>(kDimW) * ns;
  for (int i = 0; i < ns; ++i) {
    h.signals[i].physical_min =
        parse_double_field(signal_text(kPhysMinW, i), "physical_min", off + 8u * i);
  }
  off += static_cast<std::size_t>(kPhysMinW) * ns;
  for (int i = 0; i < ns; ++i) {
    h.signals[i].physical_max =
        parse_double_field(signal_text(kPhysMaxW, i), "physical_max", off + 8u * i);
  }
  off += static_cast<std::size_t>(kPhysMaxW) * ns;
  for (int i = 0; i < ns; ++i) {
    h.signals[i].digital_min =
        static_cast<int>(parse_int_field(signal_text(kDigMinW, i), "digital_min", off + 8u * i));
  }
  off += static_cast<std::size_t>(kDigMinW) * ns;
  for (int i = 0; i < ns; ++i) {
    h.signals[i].digital_max =
        static_cast<int>(parse_int_field(signal_text(kDigMaxW, i), "digital_max", off + 8u * i));
  }
  off += static_cast<std::size_t>(kDigMaxW) * ns;
  for (int i = 0; i < ns; ++i) h.signals[i].prefiltering = signal_text(kPrefilterW, i);
  off += static_cast<std::size_t>(kPrefilterW) * ns;
  for (int i = 0; i < ns; ++i) {
    h.signals[i].samples_per_record =
        static_cast<int>(parse_int_field(signal_text(kSamplesW, i), "samples_per_record", off + 8u * i));
    if (h.signals[i].samples_per_record < 1)
      raise(ErrorCode::InvalidHeaderField,
            "samples_per_record must be >= 1 for signal " + std::to_string(i));
  }
  off += static_cast<std::size_t>(kSamplesW) * ns;
  for (int i = 0; i < ns; ++i) h.signals[i].reserved = signal_text(kSigReservedW, i);
  off += static_cast<std::size_t>(kSigReservedW) * ns;

  return h;
}

std::vector<std::uint8_t> serialize_edf_header(const EdfHeader& h) {
  std::vector<std::uint8_t> out;
  out.reserve(256u * (h.signals.size() + 1));
  char buf[64];

  put_field(out, std::to_string(h.version), kVersionW);
  put_field(out, h.patient_id, kPatientW);
  put_field(out, h.recording_id, kRecordingW);
  std::snprintf(buf, sizeof(buf), "%02d.%02d.%02d", h.start_datetime.day, h.start_datetime.month,
                h.start_datetime.year % 100);
  put_field(out, buf, kDateW);
  std::snprintf(buf, sizeof(buf), "%02d.%02d.%02d", h.start_datetime.hour, h.start_datetime.minute,
                h.start_datetime.second);
  put_field(out, buf, kTimeW);
  put_field(out, std::to_string(256u * (h.signals.size() + 1)), kHeaderBytesW);
  put_field(out, h.reserved, kReservedW);
  put_field(out, std::to_string(h.n_records), kNRecordsW);
  put_field(out, format_edf_number(h.record_duration_s, kDurationW), kDurationW);
  put_field(out, std::to_string(h.signals.size()), kNSignalsW);

  for (const auto& s : h.signals) put_field(out, s.label, kLabelW);
  for (const auto& s : h.signals) put_field(out, s.transducer, kTransducerW);
  for (const auto& s : h.signals) put_field(out, s.physical_dimension, kDimW);
  for (const auto& s : h.signals) put_field(out, format_edf_number(s.physical_min, kPhysMinW), kPhysMinW);
  for (const auto& s : h.signals) put_field(out, format_edf_number(s.physical_max, kPhysMaxW), kPhysMaxW);
  for (const auto& s : h.signals) put_field(out, std::to_string(s.digital_min), kDigMinW);
  for (const auto& s : h.signals) put_field(out, std::to_string(s.digital_max), kDigMaxW);
  for (const auto& s : h.signals) put_field(out, s.prefiltering, kPrefilterW);
  for (const auto& s : h.signals) put_field(out, std::to_string(s.samples_per_record), kSamplesW);
  for (const auto& s : h.signals) put_field(out, s.reserved, kSigReservedW);
  return out;
}

EEGRecording read_signals(const EdfHeader& h, const std::vector<std::uint8_t>& payload) {
  const std::uint64_t expected = checked_payload_bytes(h);
  if (payload.size() != expected)
    raise(ErrorCode::TruncatedRecords, "payload holds " + std::to_string(payload.size()) +
                                           " bytes, header implies " + std::to_string(expected));

  std::vector<int> eeg_indices;
  for (int i = 0; i < h.n_signals; ++i) {
    if (!h.signals[i].is_annotation()) eeg_indices.push_back(i);
  }

  EEGRecording rec;
  rec.sample_rate_hz = 0.0;
  for (int idx : eeg_indices) {
    const auto& s = h.signals[idx];
    if (s.digital_max == s.digital_min)
      raise(ErrorCode::DegenerateCalibration,
            "digital_min == digital_max for signal '" + s.label + "'");
    const double rate = s.samples_per_record / h.record_duration_s;
    if (rec.sample_rate_hz == 0.0) {
      rec.sample_rate_hz = rate;
    } else if (rate != rec.sample_rate_hz) {
      raise(ErrorCode::MixedSampleRate, "signal '" + s.label + "' runs at " + std::to_string(rate) +
                                            " Hz, expected " + std::to_string(rec.sample_rate_hz));
    }
    rec.channel_labels.push_back(s.label);
  }

  const std::size_t n_channels = eeg_indices.size();
  const std::size_t samples_per_channel =
      n_channels == 0 ? 0
                      : static_cast<std::size_t>(h.n_records) *
                            h.signals[eeg_indices[0]].samples_per_record;
  rec.samples = Mat(n_channels, samples_per_channel);

  // Byte offset of each signal inside one record.
  std::vector<std::size_t> signal_offset(h.n_signals, 0);
  std::size_t acc = 0;
  for (int i = 0; i < h.n_signals; ++i) {
    signal_offset[i] = acc;
    acc += static_cast<std::size_t>(h.signals[i].samples_per_record) * 2;
  }
  const std::size_t record_stride = acc;

  for (std::size_t c = 0; c < n_channels; ++c) {
    const auto& s = h.signals[eeg_indices[c]];
    const double gain = (s.physical_max - s.physical_min) /
                        (static_cast<double>(s.digital_max) - s.digital_min);
    const std::size_t base = signal_offset[eeg_indices[c]];
    std::size_t col = 0;
    for (long r = 0; r < h.n_records; ++r) {
      const std::uint8_t* rp = payload.data() + static_cast<std::size_t>(r) * record_stride + base;
      for (int k = 0; k < s.samples_per_record; ++k) {
        const std::int16_t d =
            static_cast<std::int16_t>(static_cast<std::uint16_t>(rp[2 * k]) |
                                      (static_cast<std::uint16_t>(rp[2 * k + 1]) << 8));
        rec.samples(c, col++) = (d - s.digital_min) * gain + s.physical_min;
      }
    }
  }
  return rec;
}

std::vector<std::uint8_t> annotation_stream(const EdfHeader& h,
                                            const std::vector<std::uint8_t>& payload) {
  const std::uint64_t expected = checked_payload_bytes(h);
  if (payload.size() != expected)
    raise(ErrorCode::TruncatedRecords, "payload holds " + std::to_string(payload.size()) +
                                           " bytes, header implies " + std::to_string(expected));
  std::vector<std::size_t> signal_offset(h.n_signals, 0);
  std::size_t acc = 0;
  for (int i = 0; i < h.n_signals; ++i) {
    signal_offset[i] = acc;
    acc += static_cast<std::size_t>(h.signals[i].samples_per_record) * 2;
  }
  std::vector<std::uint8_t> stream;
  for (long r = 0; r < h.n_records; ++r) {
    for (int i = 0; i < h.n_signals; ++i) {
      if (!h.signals[i].is_annotation()) continue;
      const std::uint8_t* rp = payload.data() + static_cast<std::size_t>(r) * acc + signal_offset[i];
      stream.insert(stream.end(), rp, rp + static_cast<std::size_t>(h.signals[i].samples_per_record) * 2);
    }
  }
  return stream;
}

std::vector<Event> parse_annotations(const std::vector<std::uint8_t>& bytes) {
  std::vector<Event> events;
  std::size_t pos = 0;
  const std::size_t n = bytes.size();

  auto parse_decimal = [&](const std::string& text, const char* what) {
    char* end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v))
      raise(ErrorCode::MalformedTal, std::string("bad ") + what + " \"" + text + "\"");
    return v;
  };

  while (pos < n) {
    if (bytes[pos] == 0) {  // padding between TALs
      ++pos;
      continue;
    }
    if (bytes[pos] != '+' && bytes[pos] != '-')
      raise(ErrorCode::MalformedTal,
            "TAL at offset " + std::to_string(pos) + " does not start with '+' or '-'");

    std::size_t start = pos;
    while (pos < n && bytes[pos] != kTalField && bytes[pos] != kTalDuration) ++pos;
    if (pos >= n) raise(ErrorCode::MalformedTal, "unterminated onset field");
    const double onset =
        parse_decimal(std::string(bytes.begin() + start, bytes.begin() + pos), "onset");
    if (onset < 0) raise(ErrorCode::NegativeOnset, "onset " + std::to_string(onset));

    double duration = 0.0;
    if (bytes[pos] == kTalDuration) {
      ++pos;
      start = pos;
      while (pos < n && bytes[pos] != kTalField) ++pos;
      if (pos >= n) raise(ErrorCode::MalformedTal, "unterminated duration field");
      duration = parse_decimal(std::string(bytes.begin() + start, bytes.begin() + pos), "duration");
    }
    ++pos;  // consume the field separator after onset/duration

    // Annotation texts, each terminated by DC4, until the NUL that ends the TAL.
    bool terminated = false;
    while (pos < n) {
      if (bytes[pos] == 0) {
        ++pos;
        terminated = true;
        break;
      }
      start = pos;
      while (pos < n && bytes[pos] != kTalField && bytes[pos] != 0) ++pos;
      if (pos >= n || bytes[pos] == 0)
        raise(ErrorCode::MalformedTal, "annotation text missing its terminator");
      std::string text(bytes.begin() + start, bytes.begin() + pos);
      ++pos;
      if (!text.empty()) events.push_back(Event{onset, duration, text});
    }
    if (!terminated) raise(ErrorCode::MalformedTal, "TAL stream missing its terminating NUL");
  }
  return events;
}

EdfFile load_edf_bytes(const std::vector<std::uint8_t>& bytes) {
  EdfFile file;
  file.header = parse_edf_header(bytes);
  std::vector<std::uint8_t> payload(bytes.begin() + file.header.header_bytes, bytes.end());
  file.recording = read_signals(file.header, payload);
  const auto stream = annotation_stream(file.header, payload);
  if (!stream.empty()) file.events = parse_annotations(stream);
  return file;
}

EdfFile load_edf(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoFailure, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return load_edf_bytes(bytes);
}

RunType run_type_from_number(int run_number) {
  switch (run_number) {
    case 1: return RunType::BaselineEyesOpen;
    case 2: return RunType::BaselineEyesClosed;
    case 3: case 7: case 11: return RunType::MotionFist;
    case 4: case 8: case 12: return RunType::ImageryFist;
    case 5: case 9: case 13: return RunType::MotionBoth;
    case 6: case 10: case 14: return RunType::ImageryBoth;
    default:
      raise(ErrorCode::UnknownRunType, "run number " + std::to_string(run_number));
  }
}

std::optional<PhysioNetName> parse_physionet_name(const std::string& path) {
  std::string base = path;
  const auto slash = base.find_last_of("/\\");
  if (slash != std::string::npos) base = base.substr(slash + 1);
  static const std::regex pattern(R"(S(\d{1,4})R(\d{1,4})(\.edf)?$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_search(base, m, pattern)) return std::nullopt;
  return PhysioNetName{std::stoi(m[1]), std::stoi(m[2])};
}

int num_classes(TaskScheme scheme) {
  switch (scheme) {
    case TaskScheme::LR: return 2;
    case TaskScheme::LRO: return 3;
    case TaskScheme::LROF: return 4;
  }
  return 0;
}

const char* class_name(TaskScheme scheme, int index) {
  static const char* names[] = {"L", "R", "O", "F"};
  if (index < 0 || index >= num_classes(scheme)) return "?";
  return names[index];
}

std::optional<TaskScheme> scheme_from_string(const std::string& text) {
  if (text == "LR" || text == "lr") return TaskScheme::LR;
  if (text == "LRO" || text == "lro") return TaskScheme::LRO;
  if (text == "LROF" || text == "lrof") return TaskScheme::LROF;
  return std::nullopt;
}

const char* scheme_to_string(TaskScheme scheme) {
  switch (scheme) {
    case TaskScheme::LR: return "LR";
    case TaskScheme::LRO: return "LRO";
    case TaskScheme::LROF: return "LROF";
  }
  return "?";
}

std::optional<int> class_for_event(TaskScheme scheme, RunType run, const std::string& label) {
  if (run == RunType::ImageryFist) {
    if (label == "T1") return 0;  // left fist
    if (label == "T2") return 1;  // right fist
    return std::nullopt;
  }
  if (run == RunType::ImageryBoth && scheme == TaskScheme::LROF && label == "T2") {
    return 3;  // both feet
  }
  return std::nullopt;
}

std::vector<Epoch> extract_epochs(const EEGRecording& rec, const std::vector<Event>& events,
                                  TaskScheme scheme, double window_s, RunType run,
                                  int subject_id) {
  const long window_samples = std::lround(window_s * rec.sample_rate_hz);
  if (window_samples < 1)
    raise(ErrorCode::WindowOutOfBounds, "window of " + std::to_string(window_s) + " s is empty");
  const long total = static_cast<long>(rec.samples.cols());

  auto cut = [&](long start, int label) {
    Epoch e;
    e.signals = Mat(rec.samples.rows(), static_cast<std::size_t>(window_samples));
    for (std::size_t c = 0; c < rec.samples.rows(); ++c) {
      for (long s = 0; s < window_samples; ++s) {
        e.signals(c, static_cast<std::size_t>(s)) = rec.samples(c, static_cast<std::size_t>(start + s));
      }
    }
    e.label = label;
    e.subject_id = subject_id;
    return e;
  };

  std::vector<Epoch> epochs;
  if (run == RunType::BaselineEyesOpen) {
    if (scheme == TaskScheme::LR) return epochs;  // scheme has no O class
    const int o_class = 2;
    for (long start = 0; start + window_samples <= total; start += window_samples) {
      epochs.push_back(cut(start, o_class));
    }
    return epochs;
  }

  for (const auto& ev : events) {
    const auto cls = class_for_event(scheme, run, ev.label);
    if (!cls) continue;
    const long start = std::lround(ev.onset_s * rec.sample_rate_hz);
    if (start < 0 || start + window_samples > total)
      raise(ErrorCode::WindowOutOfBounds,
            "event at " + std::to_string(ev.onset_s) + " s needs " + std::to_string(window_samples) +
                " samples starting at " + std::to_string(start) + ", recording has " +
                std::to_string(total));
    epochs.push_back(cut(start, *cls));
  }
  return epochs;
}

}  // namespace eegpool
