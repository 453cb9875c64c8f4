#pragma once

#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cabin/state.hpp"
#include "cabin/value.hpp"

namespace cabin {

inline constexpr std::string_view kNoChannelOwner = "none";

// Named degree words. Levels are absolute targets, steps are signed deltas.
const std::map<std::string, double>& level_degrees();  // max/high/medium/low/min = 100/75/50/25/0
const std::map<std::string, double>& step_degrees();   // large/little/tiny = 20/10/5

struct VolumeCommand {
    struct Absolute { std::int64_t value; };
    struct Delta { std::int64_t amount; };
    struct Level { std::string degree; };                   // level_degrees()
    struct Step { std::string degree; bool increase; };     // step_degrees()

    std::variant<Absolute, Delta, Level, Step> command;
};

struct AcquireResult {
    bool granted = false;
    std::string previous_owner;  // "none" when the channel was free
};

// Invoked with the id of a device that just lost the sound channel.
using RelinquishFn = std::function<void(const std::string& previous_owner)>;

// Schema entry shared by environment attributes and device attributes.
struct AttributeTemplate {
    std::string name;
    TypeTag type = TypeTag::string;
    Value default_value;
    std::string description;
    std::optional<double> min;
    std::optional<double> max;
    std::vector<std::string> allowed;  // string enumeration, empty = free text
    bool nullable = false;
    bool patchable = false;  // reachable through some setter

    // Empty string when `v` is acceptable, otherwise the reason it is not.
    std::string check(const Value& v) const;
    // Integer literal widened to real for real-typed attributes; other values unchanged.
    Value coerce(const Value& v) const;
};

// Shared cabin-wide state: volume, sound channel, cabin temperature and display settings.
// One instance per world; devices never cache these values.
class GlobalEnvironment {
public:
    GlobalEnvironment() = default;

    // Devices must be registered before they can hold the sound channel.
    void register_device(std::string device_id);
    bool is_registered(std::string_view device_id) const;

    AcquireResult acquire_sound_channel(std::string_view requester, const RelinquishFn& on_relinquish = {});
    // Frees the channel if `owner` holds it. Returns whether anything changed.
    bool release_sound_channel(std::string_view owner, const RelinquishFn& on_relinquish = {});

    // Clamps to [0,100] and logs a warning. In strict mode an out-of-range absolute value throws
    // ConstraintError instead.
    std::int64_t set_volume(const VolumeCommand& cmd, bool strict = false);

    void set_temperature(double celsius);
    void set_speaker(std::string zone);
    void set_unit_system(std::string system);
    void set_time_format(std::string format);

    std::int64_t volume() const noexcept { return volume_; }
    const std::string& sound_channel() const noexcept { return sound_channel_; }
    double temperature() const noexcept { return temperature_; }
    const std::string& speaker() const noexcept { return speaker_; }
    const std::string& unit_system() const noexcept { return unit_system_; }
    const std::string& time_format() const noexcept { return time_format_; }

    // Path-style access used by the world setter layer ("volume", "sound_channel", ...).
    Value get(std::string_view attribute) const;
    void set(std::string_view attribute, const Value& v, const RelinquishFn& on_relinquish = {});

    DeviceState environment_state() const;

    static const std::vector<AttributeTemplate>& attribute_templates();
    static const AttributeTemplate* find_template(std::string_view attribute);

private:
    std::int64_t volume_ = 50;
    std::string sound_channel_{kNoChannelOwner};
    double temperature_ = 22.0;
    std::string speaker_ = "driver's seat";
    std::string unit_system_ = "metric";
    std::string time_format_ = "24h";
    std::set<std::string, std::less<>> registered_;
};

// Single-writer contract for a world: entering a mutating section while another is open throws.
class ExclusiveAccess {
public:
    class Lease {
    public:
        explicit Lease(ExclusiveAccess& owner);
        ~Lease();
        Lease(const Lease&) = delete;
        Lease& operator=(const Lease&) = delete;

    private:
        ExclusiveAccess& owner_;
    };

    ExclusiveAccess() = default;
    // A copied world starts unlocked.
    ExclusiveAccess(const ExclusiveAccess&) noexcept {}
    ExclusiveAccess& operator=(const ExclusiveAccess&) noexcept { return *this; }

    [[nodiscard]] Lease lease() { return Lease(*this); }

private:
    std::atomic<bool> busy_{false};
};

}  // namespace cabin
