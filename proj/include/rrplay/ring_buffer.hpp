#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rrplay {

// One stored transition. The id is the global insertion timestep and is
// unique over the lifetime of a buffer; the payload is opaque to the
// sampling code.
template <class Payload = std::uint64_t>
struct Transition {
  std::uint64_t id = 0;
  Payload payload{};
  double priority = 0.0;
};

// Fixed-capacity FIFO circular buffer. The transition inserted at timestep t
// always lives in slot t % capacity, so once the buffer is full every insert
// evicts the oldest transition. Occupied slots form the prefix [0, size()).
template <class Payload = std::uint64_t>
class RingBuffer {
 public:
  explicit RingBuffer(std::size_t capacity)
      : capacity_(capacity), slots_(capacity) {
    if (capacity == 0) {
      throw std::invalid_argument("RingBuffer: capacity must be positive");
    }
  }

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return len_; }
  bool full() const { return len_ == capacity_; }
  bool occupied(std::size_t slot) const {
    return slot < capacity_ && slots_[slot].has_value();
  }

  // Timestep that will be assigned to the next insert.
  std::uint64_t next_id() const { return next_id_; }

  // Slot the next insert will write to.
  std::size_t write_cursor() const { return write_cursor_; }

  // Stores a transition at slot (id % capacity) and returns the evicted one,
  // if that slot was occupied.
  std::optional<Transition<Payload>> insert(Payload payload, double priority) {
    if (priority < 0.0) {
      throw std::invalid_argument("RingBuffer::insert: priority must be >= 0");
    }
    const std::uint64_t id = next_id_++;
    const std::size_t slot = static_cast<std::size_t>(id % capacity_);
    std::optional<Transition<Payload>> evicted =
        std::exchange(slots_[slot],
                      Transition<Payload>{id, std::move(payload), priority});
    if (!evicted.has_value()) {
      ++len_;
    }
    write_cursor_ = (slot + 1) % capacity_;
    return evicted;
  }

  const std::optional<Transition<Payload>>& get(std::size_t slot) const {
    if (slot >= capacity_) {
      throw std::out_of_range("RingBuffer::get: slot out of range");
    }
    return slots_[slot];
  }

  std::uint64_t id_at(std::size_t slot) const {
    const auto& t = get(slot);
    if (!t.has_value()) {
      throw std::out_of_range("RingBuffer::id_at: slot is empty");
    }
    return t->id;
  }

 private:
  std::size_t capacity_;
  std::vector<std::optional<Transition<Payload>>> slots_;
  std::size_t write_cursor_ = 0;
  std::size_t len_ = 0;
  std::uint64_t next_id_ = 0;
};

}  // namespace rrplay
