#include "sopbench/sop.hpp"

#include "sopbench/errors.hpp"

namespace sopbench {

namespace {

// Byte-identical to data/rules/aitw.rules.jsonl (checked by test).
constexpr std::string_view kAitwRules = R"rulefile(
{"match_on":"kind","pattern":"scroll","description":"scroll and view page content","source":"paper"}
{"match_on":"kind","pattern":"type","description":"type '*'","source":"paper"}
{"match_on":"kind","pattern":"task_complete","description":"task complete","source":"paper"}
{"match_on":"kind","pattern":"press_home","description":"switch to the home screen","source":"paper"}
{"match_on":"text","pattern":"search","description":"search on the website","source":"paper"}
{"match_on":"text","pattern":"search or type web address","description":"search or type web address","source":"paper"}
{"match_on":"text","pattern":"g","description":"search on the website","source":"paper"}
{"match_on":"text","pattern":"9","description":"search on the website","source":"paper"}
{"match_on":"text","pattern":"add to cart","description":"add goods to cart","source":"paper"}
{"match_on":"text","pattern":"accept & continue","description":"continue the next operate","source":"paper"}
{"match_on":"text","pattern":"agree","description":"continue the next operate","source":"paper"}
{"match_on":"text","pattern":"ok","description":"continue the next operate","source":"paper"}
{"match_on":"text","pattern":"remove","description":"delete text","source":"paper"}
{"match_on":"text","pattern":"install","description":"install the app","source":"paper"}
{"match_on":"text","pattern":"open","description":"open the app","source":"paper"}
{"match_on":"text","pattern":"uninstall","description":"uninstall the app","source":"paper"}
{"match_on":"text","pattern":"location","description":"set your location","source":"paper"}
{"match_on":"text","pattern":"search amazon","description":"search on the website","source":"paper"}
{"match_on":"text","pattern":"search for anything","description":"search on the website","source":"paper"}
{"match_on":"text","pattern":"search here","description":"search on the website","source":"paper"}
{"match_on":"text","pattern":"checkout","description":"checkout","source":"paper"}
{"match_on":"text","pattern":"view in cart","description":"view in cart","source":"paper"}
{"match_on":"text","pattern":"history","description":"view the history info","source":"paper"}
{"match_on":"text","pattern":"add","description":"add goods to cart","source":"paper"}
{"match_on":"text","pattern":"videos","description":"open then video","source":"paper"}
{"match_on":"text","pattern":"chrome","description":"open the browser","source":"paper"}
{"match_on":"text","pattern":"settings","description":"display menu options","source":"paper"}
{"match_on":"text","pattern":"site settings","description":"display menu options","source":"paper"}
{"match_on":"text","pattern":"m","description":"display menu options","source":"paper"}
{"match_on":"text","pattern":"notifications","description":"check messages","source":"paper"}
{"match_on":"text","pattern":"take me to gmail","description":"use the email service","source":"paper"}
{"match_on":"ui_type","pattern":"icon_shopping_cart","description":"view in cart","source":"paper"}
{"match_on":"ui_type","pattern":"icon_plus","description":"add goods to cart","source":"paper"}
{"match_on":"ui_type","pattern":"icon_three_bars","description":"display menu options","source":"paper"}
{"match_on":"ui_type","pattern":"icon_three_dots","description":"display menu options","source":"paper"}
{"match_on":"ui_type","pattern":"icon_v_downward","description":"view page content","source":"paper"}
{"match_on":"ui_type","pattern":"icon_mic","description":"input voice","source":"paper"}
{"match_on":"ui_type","pattern":"icon_assistant","description":"open assistant","source":"paper"}
{"match_on":"ui_type","pattern":"icon_play","description":"playing media","source":"paper"}
{"match_on":"ui_type","pattern":"icon_person","description":"open profile and community","source":"paper"}
{"match_on":"ui_type","pattern":"icon_magnifying_glass","description":"search on the website","source":"paper"}
{"match_on":"ui_type","pattern":"icon_google","description":"search on the website","source":"paper"}
{"match_on":"ui_type","pattern":"icon_chat","description":"send a message to someone","source":"paper"}
{"match_on":"ui_type","pattern":"icon_settings","description":"set function","source":"paper"}
{"match_on":"ui_type","pattern":"icon_nav_bar_rect","description":"switch to the other app","source":"paper"}
{"match_on":"ui_type","pattern":"icon_nav_bar_circle","description":"switch to the home screen","source":"paper"}
{"match_on":"ui_type","pattern":"icon_home","description":"switch to the home screen","source":"paper"}
{"match_on":"ui_type","pattern":"icon_take_photo","description":"take a photo","source":"paper"}
{"match_on":"ui_type","pattern":"icon_time","description":"view time","source":"paper"}
{"match_on":"ui_type","pattern":"icon_envelope","description":"view order","source":"paper"}
{"match_on":"ui_type","pattern":"icon_location","description":"set your location","source":"paper"}
{"match_on":"kind","pattern":"press_back","excluded":true,"source":"paper"}
{"match_on":"text","pattern":"close","excluded":true,"exact":false,"source":"invented"}
{"match_on":"text","pattern":"cancel","excluded":true,"exact":false,"source":"invented"}
{"match_on":"text","pattern":"x","excluded":true,"exact":false,"source":"invented"}
{"match_on":"text","pattern":"dismiss","excluded":true,"exact":false,"source":"invented"}
{"match_on":"kind","pattern":"click","description":"view and click page content","priority":-10,"source":"invented"}
{"match_on":"kind","pattern":"*","description":"Others","excluded":true,"priority":-100,"source":"invented"}
)rulefile";

// Byte-identical to data/rules/aia_medical.rules.jsonl (checked by test).
constexpr std::string_view kAiaMedicalRules = R"rulefile(
{"match_on":"text","pattern":"confirm","description":"Consent Information","exact":false,"source":"paper"}
{"match_on":"text","pattern":"i understand","description":"Consent Information","exact":false,"source":"paper"}
{"match_on":"text","pattern":"agree to authorize","description":"Consent Information","exact":false,"source":"paper"}
{"match_on":"text","pattern":"log in","description":"Consent Information","exact":false,"source":"paper"}
{"match_on":"text","pattern":"urology","description":"Select Department","exact":false,"source":"paper"}
{"match_on":"text","pattern":"general surgery","description":"Select Department","exact":false,"source":"paper"}
{"match_on":"text","pattern":"reproductive clinic","description":"Select Department","exact":false,"source":"paper"}
{"match_on":"text","pattern":"east campus","description":"Select Clinic Area","exact":false,"source":"invented"}
{"match_on":"text","pattern":"west campus","description":"Select Clinic Area","exact":false,"source":"invented"}
{"match_on":"text","pattern":"clinic area","description":"Select Clinic Area","exact":false,"source":"invented"}
{"match_on":"text","pattern":"order payment","description":"Order Payment","exact":false,"source":"invented"}
{"match_on":"text","pattern":"pay order","description":"Order Payment","exact":false,"source":"invented"}
{"match_on":"text","pattern":"appointment time","description":"Select Appointment Time","exact":false,"source":"invented"}
{"match_on":"text","pattern":"time slot","description":"Select Appointment Time","exact":false,"source":"invented"}
{"match_on":"text","pattern":"outpatient registration","description":"Outpatient Registration","exact":false,"source":"invented"}
{"match_on":"text","pattern":"register now","description":"Outpatient Registration","exact":false,"source":"invented"}
{"match_on":"text","pattern":"outpatient payment","description":"Outpatient Payment","exact":false,"source":"invented"}
{"match_on":"text","pattern":"view reports","description":"View Reports","exact":false,"source":"invented"}
{"match_on":"text","pattern":"lab report","description":"View Reports","exact":false,"source":"invented"}
{"match_on":"text","pattern":"test report","description":"View Reports","exact":false,"source":"invented"}
{"match_on":"text","pattern":"check expenses","description":"Check Expenses","exact":false,"source":"invented"}
{"match_on":"text","pattern":"expense detail","description":"Check Expenses","exact":false,"source":"invented"}
{"match_on":"text","pattern":"registration history","description":"Registration History","exact":false,"source":"invented"}
{"match_on":"text","pattern":"registration records","description":"Registration History","exact":false,"source":"invented"}
{"match_on":"text","pattern":"electronic invoice","description":"Electronic Invoices","exact":false,"source":"invented"}
{"match_on":"text","pattern":"invoice","description":"Electronic Invoices","exact":false,"source":"invented"}
{"match_on":"text","pattern":"inpatient","description":"Inpatient Services","exact":false,"source":"invented"}
{"match_on":"text","pattern":"hospitalization","description":"Inpatient Services","exact":false,"source":"invented"}
{"match_on":"kind","pattern":"task_complete","description":"task complete","source":"invented"}
{"match_on":"kind","pattern":"press_back","excluded":true,"source":"invented"}
{"match_on":"kind","pattern":"*","description":"Others","excluded":true,"priority":-100,"source":"invented"}
)rulefile";

}  // namespace

std::string_view builtin_rules_text(std::string_view name) {
    if (name == "aitw") return kAitwRules.substr(1);
    if (name == "aia_medical") return kAiaMedicalRules.substr(1);
    throw ConfigError("unknown builtin rule set '" + std::string(name) + "'");
}

}  // namespace sopbench
