#include "speechpipe/decode.h"

#include "json.hpp"

namespace speechpipe {

namespace {

// Supported language codes, in registry order.
const LidLabelRegistry::Entry kLanguages[] = {
    {"zh", "Chinese", "中文"},
    {"en", "English", "英语"},
    {"es", "Spanish", "西班牙语"},
    {"fr", "French", "法语"},
    {"ja", "Japanese", "日语"},
    {"ko", "Korean", "韩语"},
    {"ru", "Russian", "俄语"},
    {"de", "German", "德语"},
    {"pt", "Portuguese", "葡萄牙语"},
    {"ar", "Arabic", "阿拉伯语"},
    {"ab", "Abkhazian", "阿布哈兹语"},
    {"af", "Afrikaans", "南非荷兰语"},
    {"am", "Amharic", "阿姆哈拉语"},
    {"as", "Assamese", "阿萨姆语"},
    {"az", "Azerbaijani", "阿塞拜疆语"},
    {"ba", "Bashkir", "巴什基尔语"},
    {"be", "Belarusian", "白俄罗斯语"},
    {"bg", "Bulgarian", "保加利亚语"},
    {"bn", "Bengali", "孟加拉语"},
    {"br", "Breton", "布列塔尼语"},
    {"bs", "Bosnian", "波斯尼亚语"},
    {"ca", "Catalan", "加泰罗尼亚语"},
    {"ceb", "Cebuano", "宿务语"},
    {"cs", "Czech", "捷克语"},
    {"cy", "Welsh", "威尔士语"},
    {"da", "Danish", "丹麦语"},
    {"el", "Greek", "希腊语"},
    {"eo", "Esperanto", "世界语"},
    {"et", "Estonian", "爱沙尼亚语"},
    {"eu", "Basque", "巴斯克语"},
    {"fa", "Persian", "波斯语"},
    {"fi", "Finnish", "芬兰语"},
    {"fo", "Faroese", "法罗语"},
    {"gl", "Galician", "加利西亚语"},
    {"gn", "Guarani", "瓜拉尼语"},
    {"gu", "Gujarati", "古吉拉特语"},
    {"gv", "Manx", "马恩语"},
    {"ha", "Hausa", "豪萨语"},
    {"haw", "Hawaiian", "夏威夷语"},
    {"hi", "Hindi", "印地语"},
    {"hr", "Croatian", "克罗地亚语"},
    {"ht", "Haitian Creole", "海地克里奥尔语"},
    {"hu", "Hungarian", "匈牙利语"},
    {"hy", "Armenian", "亚美尼亚语"},
    {"ia", "Interlingua", "国际语"},
    {"id", "Indonesian", "印度尼西亚语"},
    {"is", "Icelandic", "冰岛语"},
    {"it", "Italian", "意大利语"},
    {"iw", "Hebrew", "希伯来语"},
    {"jw", "Javanese", "爪哇语"},
    {"ka", "Georgian", "格鲁吉亚语"},
    {"kk", "Kazakh", "哈萨克语"},
    {"km", "Khmer", "高棉语"},
    {"kn", "Kannada", "卡纳达语"},
    {"la", "Latin", "拉丁语"},
    {"lb", "Luxembourgish", "卢森堡语"},
    {"ln", "Lingala", "林加拉语"},
    {"lo", "Lao", "老挝语"},
    {"lt", "Lithuanian", "立陶宛语"},
    {"lv", "Latvian", "拉脱维亚语"},
    {"mg", "Malagasy", "马尔加什语"},
    {"mi", "Māori", "毛利语"},
    {"mk", "Macedonian", "马其顿语"},
    {"ml", "Malayalam", "马拉雅拉姆语"},
    {"mn", "Mongolian", "蒙古语"},
    {"mr", "Marathi", "马拉地语"},
    {"ms", "Malay", "马来语"},
    {"mt", "Maltese", "马耳他语"},
    {"my", "Burmese", "缅甸语"},
    {"ne", "Nepali", "尼泊尔语"},
    {"nl", "Dutch", "荷兰语"},
    {"no", "Norwegian", "挪威语"},
    {"oc", "Occitan", "奥克语"},
    {"pa", "Punjabi", "旁遮普语"},
    {"pl", "Polish", "波兰语"},
    {"ps", "Pashto", "普什图语"},
    {"ro", "Romanian", "罗马尼亚语"},
    {"sd", "Sindhi", "信德语"},
    {"si", "Sinhala", "僧伽罗语"},
    {"sk", "Slovak", "斯洛伐克语"},
    {"sl", "Slovenian", "斯洛文尼亚语"},
    {"so", "Somali", "索马里语"},
    {"sq", "Albanian", "阿尔巴尼亚语"},
    {"sr", "Serbian", "塞尔维亚语"},
    {"sv", "Swedish", "瑞典语"},
    {"sw", "Swahili", "斯瓦希里语"},
    {"ta", "Tamil", "泰米尔语"},
    {"te", "Telugu", "泰卢固语"},
    {"th", "Thai", "泰语"},
    {"tr", "Turkish", "土耳其语"},
    {"uk", "Ukrainian", "乌克兰语"},
    {"ur", "Urdu", "乌尔都语"},
    {"uz", "Uzbek", "乌兹别克语"},
    {"vi", "Vietnamese", "越南语"},
    {"yi", "Yiddish", "意第绪语"},
    {"yo", "Yoruba", "约鲁巴语"},
};

// Chinese dialect clusters, valid only after "zh".
const LidLabelRegistry::Entry kDialects[] = {
    {"mandarin", "Chinese (Mandarin)", "中文 (普通话)"},
    {"yue", "Chinese (Yue: Guangdong/Hong Kong)", "中文 (粤语：广东/香港)"},
    {"wu", "Chinese (Wu: Shanghai/Wu)", "中文 (吴语：上海/吴语片区)"},
    {"min", "Chinese (Min: Fujian)", "中文 (闽语：福建)"},
    {"north",
     "Chinese (Mandarin-North: Shandong/Gansu/Ningxia/Hebei/Shanxi/Liaoning/"
     "Shaanxi)",
     "中文 (官话-北方：山东/甘肃/宁夏/河北/山西/辽宁/陕西)"},
    {"xinan",
     "Chinese (Mandarin-Southwest: Sichuan/Yunnan/Guizhou/Hubei/Chongqing)",
     "中文 (官话-西南：四川/云南/贵州/湖北/重庆)"},
    {"xiang", "Chinese (Xiang: Hunan)", "中文 (湘语：湖南)"},
    {"bo", "Tibetan (in Chinese context)", "中文 (藏语)"},
};

}  // namespace

LidLabelRegistry::LidLabelRegistry() {
  languages_.assign(std::begin(kLanguages), std::end(kLanguages));
  dialects_.assign(std::begin(kDialects), std::end(kDialects));
  int id = 2;  // ids 0/1 are <sos>/<eos>
  for (const auto& e : languages_) code_to_id_[e.code] = id++;
  for (const auto& e : dialects_) code_to_id_[e.code] = id++;
}

const LidLabelRegistry& LidLabelRegistry::standard() {
  static const LidLabelRegistry registry;
  return registry;
}

int LidLabelRegistry::vocab_size() const {
  return 2 + static_cast<int>(languages_.size() + dialects_.size());
}

bool LidLabelRegistry::is_language_token(int id) const {
  return id >= 2 && id < 2 + static_cast<int>(languages_.size());
}

bool LidLabelRegistry::is_dialect_token(int id) const {
  int base = 2 + static_cast<int>(languages_.size());
  return id >= base && id < base + static_cast<int>(dialects_.size());
}

int LidLabelRegistry::token_id(const std::string& code) const {
  auto it = code_to_id_.find(code);
  if (it == code_to_id_.end())
    throw InvalidArgumentError("unknown LID code: " + code);
  return it->second;
}

const std::string& LidLabelRegistry::code(int id) const {
  if (is_language_token(id)) return languages_[id - 2].code;
  int base = 2 + static_cast<int>(languages_.size());
  if (is_dialect_token(id)) return dialects_[id - base].code;
  throw InvalidArgumentError("token id " + std::to_string(id) +
                             " is not a label token");
}

std::string LidLabelRegistry::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["sos"] = sos_id();
  j["eos"] = eos_id();
  auto dump = [&](const std::vector<Entry>& entries, int base) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (size_t i = 0; i < entries.size(); ++i) {
      arr.push_back({{"code", entries[i].code},
                     {"id", base + static_cast<int>(i)},
                     {"english_name", entries[i].english_name},
                     {"chinese_name", entries[i].chinese_name}});
    }
    return arr;
  };
  j["languages"] = dump(languages_, 2);
  j["dialects"] = dump(dialects_, 2 + static_cast<int>(languages_.size()));
  return j.dump(2);
}

}  // namespace speechpipe
