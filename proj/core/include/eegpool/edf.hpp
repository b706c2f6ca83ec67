#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eegpool/error.hpp"
#include "eegpool/matrix.hpp"

namespace eegpool {

// EDF/EDF+ ingestion: fixed-width ASCII header, 16-bit little-endian data
// records, TAL (time-stamped annotation list) event streams.

struct EdfSignalHeader {
  std::string label;
  std::string transducer;
  std::string physical_dimension;
  double physical_min = 0.0;
  double physical_max = 0.0;
  int digital_min = 0;
  int digital_max = 0;
  std::string prefiltering;
  int samples_per_record = 0;
  std::string reserved;

  bool is_annotation() const { return label == "EDF Annotations"; }

  friend bool operator==(const EdfSignalHeader&, const EdfSignalHeader&) = default;
};

struct EdfDateTime {
  int year = 1985;  // four-digit; serialized as yy with the 1985 pivot
  int month = 1;
  int day = 1;
  int hour = 0;
  int minute = 0;
  int second = 0;

  friend bool operator==(const EdfDateTime&, const EdfDateTime&) = default;
};

struct EdfHeader {
  int version = 0;
  std::string patient_id;
  std::string recording_id;
  EdfDateTime start_datetime;
  long header_bytes = 0;  // always 256 * (n_signals + 1)
  std::string reserved;   // "EDF+C" marker lives here for EDF+ files
  long n_records = 0;
  double record_duration_s = 0.0;
  int n_signals = 0;
  std::vector<EdfSignalHeader> signals;

  long payload_bytes() const;
  int samples_per_record_total() const;

  friend bool operator==(const EdfHeader&, const EdfHeader&) = default;
};

struct EEGRecording {
  std::vector<std::string> channel_labels;  // annotation channels excluded
  double sample_rate_hz = 0.0;
  Mat samples;  // channels x time, physical units (microvolts)
};

struct Event {
  double onset_s = 0.0;
  double duration_s = 0.0;
  std::string label;  // annotation code, e.g. T0/T1/T2

  friend bool operator==(const Event&, const Event&) = default;
};

struct Epoch {
  Mat signals;  // channels x window_samples
  int label = 0;
  int subject_id = 0;
};

// Parses the fixed-width ASCII header (256 global bytes + 256 per signal,
// per-signal fields grouped field-major). Trailing spaces are stripped from
// text fields. Non-ASCII bytes in text fields are replaced with '?'.
EdfHeader parse_edf_header(const std::vector<std::uint8_t>& bytes);

// Re-emits the fixed-width ASCII header. parse_edf_header(serialize(h)) == h.
std::vector<std::uint8_t> serialize_edf_header(const EdfHeader& header);

// Decodes the data records that follow the header. `payload` must hold
// exactly n_records * sum(samples_per_record) * 2 bytes. Annotation channels
// are excluded from the sample matrix.
EEGRecording read_signals(const EdfHeader& header, const std::vector<std::uint8_t>& payload);

// Concatenated raw bytes of every annotation channel across all records,
// ready for parse_annotations. Empty when the file has no annotation signal.
std::vector<std::uint8_t> annotation_stream(const EdfHeader& header,
                                            const std::vector<std::uint8_t>& payload);

// Parses an EDF+ TAL stream. Each "+onset[<DC1>duration]<DC4>text<DC4><NUL>"
// yields one Event per nonempty text; timekeeping TALs (empty text) yield
// nothing. Accepts concatenations of valid streams.
std::vector<Event> parse_annotations(const std::vector<std::uint8_t>& bytes);

struct EdfFile {
  EdfHeader header;
  EEGRecording recording;
  std::vector<Event> events;
};

EdfFile load_edf(const std::string& path);
EdfFile load_edf_bytes(const std::vector<std::uint8_t>& bytes);

// PhysioNet motor movement/imagery run taxonomy, derived from the SxxxRyy
// file-name convention (header patient fields are unreliable).
enum class RunType {
  BaselineEyesOpen,    // run 1
  BaselineEyesClosed,  // run 2
  MotionFist,          // runs 3, 7, 11
  ImageryFist,         // runs 4, 8, 12
  MotionBoth,          // runs 5, 9, 13
  ImageryBoth,         // runs 6, 10, 14
};

RunType run_type_from_number(int run_number);

struct PhysioNetName {
  int subject = 0;
  int run = 0;
};

// Parses "S003R04" (optionally with directories and an .edf suffix).
std::optional<PhysioNetName> parse_physionet_name(const std::string& path);

enum class TaskScheme { LR, LRO, LROF };

int num_classes(TaskScheme scheme);
const char* class_name(TaskScheme scheme, int index);
std::optional<TaskScheme> scheme_from_string(const std::string& text);
const char* scheme_to_string(TaskScheme scheme);

// Maps a (run, annotation) pair onto a class index of the scheme, or nothing
// when the combination is outside the scheme. Class order: L, R, O, F.
std::optional<int> class_for_event(TaskScheme scheme, RunType run, const std::string& label);

// Cuts fixed-length labeled windows. Cue runs contribute one epoch per event
// whose (run, annotation) maps into the scheme; the eyes-open baseline run
// contributes consecutive non-overlapping windows labeled O.
std::vector<Epoch> extract_epochs(const EEGRecording& rec, const std::vector<Event>& events,
                                  TaskScheme scheme, double window_s, RunType run,
                                  int subject_id);

}  // namespace eegpool
