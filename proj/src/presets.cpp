// placeholder
namespace strfm {}
