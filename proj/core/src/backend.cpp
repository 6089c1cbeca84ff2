#include "vidctx/backend.hpp"

#include "vidctx/errors.hpp"
#include "vidctx/mock_backend.hpp"

namespace vidctx {

std::shared_ptr<Backend> make_remote_backend(const BackendDescriptor& desc);

std::shared_ptr<Backend> make_backend(const BackendDescriptor& desc) {
    switch (desc.kind) {
        case BackendKind::RemoteCompletion:
            if (desc.endpoint.empty()) {
                throw InvalidArgument("remote backend requires an endpoint URL");
            }
            return make_remote_backend(desc);
        case BackendKind::Mock:
            if (!desc.mock_script_path.empty()) {
                return MockBackend::from_script_file(desc.mock_script_path,
                                                     desc.score_source, desc.model_id);
            }
            return std::make_shared<MockBackend>(desc.score_source, desc.model_id);
    }
    throw InvalidArgument("unknown backend kind");
}

}  // namespace vidctx
